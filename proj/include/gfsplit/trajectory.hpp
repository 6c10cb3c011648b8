#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "gfsplit/discretisation.hpp"
#include "gfsplit/energy.hpp"
#include "gfsplit/errors.hpp"
#include "gfsplit/problem.hpp"

namespace gfsplit {

// Full bookkeeping of one scheme run. Index convention: step k is 1-based,
// arrays of per-step data live at [k-1]. point(0) is the initial point.
template <class P>
struct TrajectoryRecord {
  TrajectoryRecord(P start, Discretisation grid)
      : x0(std::move(start)), disc(std::move(grid)) {}

  P x0;
  Discretisation disc;

  std::vector<P> half_points;  // xhat_k = J^1_{h_k} x_{k-1}
  std::vector<P> points;       // x_k    = J^2_{h_k} xhat_k

  std::vector<double> phi1_half;  // phi1(xhat_k)
  std::vector<Energy> phi2_half;  // phi2(xhat_k); may be +infinity
  std::vector<double> phi1_full;  // phi1(x_k)
  std::vector<double> phi2_full;  // phi2(x_k)

  std::vector<double> delta;         // delta_k = [phi1(x_k) - phi1(xhat_k)]^+
  std::vector<double> delta_sum;     // Delta_k = delta_1 + ... + delta_k
  std::vector<double> step_dist_sq;  // d^2(x_k, x_{k-1})

  double phi1_x0 = 0.0;
  double phi2_x0 = 0.0;
  double max_certificate = 0.0;

  std::size_t size() const { return points.size(); }

  const P& point(std::size_t k) const {
    if (k > size()) throw OutOfRange("TrajectoryRecord::point: index");
    return k == 0 ? x0 : points[k - 1];
  }

  const P& half_point(std::size_t k) const {
    if (k < 1 || k > size()) throw OutOfRange("TrajectoryRecord::half_point: index");
    return half_points[k - 1];
  }

  // phi(x_k) = phi1(x_k) + phi2(x_k)
  double phi(std::size_t k) const {
    if (k > size()) throw OutOfRange("TrajectoryRecord::phi: index");
    if (k == 0) return phi1_x0 + phi2_x0;
    return phi1_full[k - 1] + phi2_full[k - 1];
  }

  double Delta(std::size_t k) const {
    if (k < 1 || k > size()) throw OutOfRange("TrajectoryRecord::Delta: index");
    return delta_sum[k - 1];
  }

  double Delta_total() const { return delta_sum.back(); }
  double time(std::size_t k) const { return disc.time(k); }
  double total_time() const { return disc.total_time(); }
};

// Alternating resolvent scheme: xhat_k = J^1_{h_k} x_{k-1}, x_k = J^2_{h_k} xhat_k.
template <class P>
TrajectoryRecord<P> run_scheme(const SplitProblem<P>& prob, const P& x0,
                               const Discretisation& disc) {
  const Energy e1 = prob.phi1.energy(x0);
  const Energy e2 = prob.phi2.energy(x0);
  if (!prob.in_domain(x0) || !e1.is_finite() || !e2.is_finite())
    throw DomainViolation("run_scheme: x0 must lie in the domain of both functionals");

  TrajectoryRecord<P> rec(x0, disc);
  const std::size_t n = disc.size();
  rec.half_points.reserve(n);
  rec.points.reserve(n);
  rec.phi1_x0 = e1.value();
  rec.phi2_x0 = e2.value();

  auto solve = [](const Functional<P>& f, double h, const P& x, std::size_t k,
                  int which) -> ResolventResult<P> {
    try {
      return f.resolvent(h, x);
    } catch (const Error& e) {
      throw ResolventFailure(k, which,
                             std::string("step ") + std::to_string(k) + ", resolvent " +
                                 std::to_string(which) + ": " + e.what());
    }
  };

  const P* prev = &x0;
  double running_delta = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double h = disc.step(k);
    ResolventResult<P> half = solve(prob.phi1, h, *prev, k, 1);
    ResolventResult<P> full = solve(prob.phi2, h, half.point, k, 2);

    const Energy p1h = prob.phi1.energy(half.point);
    const Energy p1f = prob.phi1.energy(full.point);
    const Energy p2f = prob.phi2.energy(full.point);
    if (!p1h.is_finite())
      throw DomainViolation("run_scheme: half-step point left the domain of phi1");
    if (!p1f.is_finite() || !p2f.is_finite())
      throw DomainViolation("run_scheme: step point left the domain of phi");

    const double d_step = prob.metric(full.point, *prev);
    const double dk = std::max(p1f.value() - p1h.value(), 0.0);
    running_delta += dk;

    rec.half_points.push_back(std::move(half.point));
    rec.points.push_back(std::move(full.point));
    rec.phi1_half.push_back(p1h.value());
    rec.phi2_half.push_back(prob.phi2.energy(rec.half_points.back()));
    rec.phi1_full.push_back(p1f.value());
    rec.phi2_full.push_back(p2f.value());
    rec.delta.push_back(dk);
    rec.delta_sum.push_back(running_delta);
    rec.step_dist_sq.push_back(d_step * d_step);
    rec.max_certificate =
        std::max({rec.max_certificate, half.certificate, full.certificate});

    prev = &rec.points.back();
  }
  return rec;
}

// Slack allowed when checking inequalities that hold exactly for exact
// resolvents: max(1e-10, 10*certificate) * (1 + |phi(x0)| + 1/min_k h_k).
template <class P>
double inequality_tolerance(const TrajectoryRecord<P>& traj) {
  const double scale =
      1.0 + std::abs(traj.phi(0)) + 1.0 / traj.disc.min_step();
  return std::max(1e-10, 10.0 * traj.max_certificate) * scale;
}

}  // namespace gfsplit
