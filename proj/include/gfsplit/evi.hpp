#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "gfsplit/problem.hpp"

namespace gfsplit {

// One tested window (a, b) against one probe y:
//   lhs      = d^2(u(b), y)/2 - d^2(u(a), y)/2
//   rhs      = (b - a) phi(y) - int_a^b phi(u(t)) dt   (trapezoid on the grid)
//   residual = lhs - rhs; nonpositive up to tolerance certifies the window.
struct EviEntry {
  double a = 0.0;
  double b = 0.0;
  std::size_t probe_index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double quad_step = 0.0;
};

struct EviReport {
  std::vector<EviEntry> entries;
  double tol = 0.0;  // quadrature estimate + path error allowance
  double worst_residual() const {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries) w = std::max(w, e.residual);
    return w;
  }
  bool all_hold() const { return worst_residual() <= tol; }
};

// Checks the integral flow inequality on a uniformly sampled path
// u(t_first + i*dt), i = 0..len-1. Window endpoints are snapped to the
// sample grid. path_error_bound is the caller's bound on how far the
// sampled path is from the exact flow (0 for closed-form flows); it enters
// the tolerance as 2*path_error_bound on top of the quadrature estimate.
template <class P>
EviReport check_evi_integral(const std::vector<P>& u, double t_first, double dt,
                             const SplitProblem<P>& prob,
                             const std::vector<P>& probes,
                             const std::vector<std::pair<double, double>>& pairs,
                             double path_error_bound = 0.0) {
  if (u.size() < 3) throw GridTooCoarse("check_evi_integral: need >= 3 samples");
  if (!(dt > 0.0)) throw InvalidInput("check_evi_integral: dt must be positive");
  if (probes.empty() || pairs.empty())
    throw InvalidInput("check_evi_integral: need probes and windows");

  const double t_last = t_first + dt * static_cast<double>(u.size() - 1);

  // Energy along the path, and its difference quotients for the tolerance.
  std::vector<double> g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Energy e = prob.total_energy(u[i]);
    if (!e.is_finite())
      throw DomainViolation("check_evi_integral: path leaves the domain");
    g[i] = e.value();
  }
  double lip = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    lip = std::max(lip, std::abs(g[i + 1] - g[i]) / dt);

  EviReport rep;
  rep.tol = dt * dt * lip + 2.0 * path_error_bound;

  auto snap = [&](double t) -> std::size_t {
    if (t < t_first - 0.5 * dt || t > t_last + 0.5 * dt)
      throw GridTooCoarse("check_evi_integral: window endpoint off the grid");
    const double idx = (t - t_first) / dt;
    const long i = std::lround(idx);
    return static_cast<std::size_t>(std::clamp(i, 0L, static_cast<long>(u.size() - 1)));
  };

  for (const auto& [a, b] : pairs) {
    if (!(0.0 < a && a < b))
      throw InvalidInput("check_evi_integral: windows must satisfy 0 < a < b");
    const std::size_t ia = snap(a);
    const std::size_t ib = snap(b);
    if (ib <= ia) throw GridTooCoarse("check_evi_integral: window shorter than grid step");
    const double ta = t_first + dt * static_cast<double>(ia);
    const double tb = t_first + dt * static_cast<double>(ib);

    for (std::size_t j = 0; j < probes.size(); ++j) {
      const Energy phi_y = prob.total_energy(probes[j]);
      if (!phi_y.is_finite())
        throw DomainViolation("check_evi_integral: probe outside domain");
      const double da = prob.metric(u[ia], probes[j]);
      const double db = prob.metric(u[ib], probes[j]);

      double integral = 0.0;  // trapezoid of g over [ta, tb]
      for (std::size_t i = ia; i < ib; ++i) integral += 0.5 * (g[i] + g[i + 1]) * dt;

      EviEntry entry;
      entry.a = ta;
      entry.b = tb;
      entry.probe_index = j;
      entry.lhs = 0.5 * db * db - 0.5 * da * da;
      entry.rhs = (tb - ta) * phi_y.value() - integral;
      entry.residual = entry.lhs - entry.rhs;
      entry.quad_step = dt;
      rep.entries.push_back(entry);
    }
  }
  return rep;
}

}  // namespace gfsplit
