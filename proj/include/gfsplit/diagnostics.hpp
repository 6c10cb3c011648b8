#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gfsplit/interpolants.hpp"
#include "gfsplit/problem.hpp"
#include "gfsplit/trajectory.hpp"

namespace gfsplit {

// ---------------------------------------------------------------------------
// Resolvent certification
// ---------------------------------------------------------------------------

struct DeviProbeReport {
  double worst_violation = 0.0;  // <= 0 (up to solver slack) certifies y
  std::size_t worst_index = 0;
};

// Worst violation over the probes z of
//   (d^2(y,z) - d^2(x,z))/(2h) + d^2(y,x)/(2h) + phi_i(y) - phi_i(z) <= 0,
// the inequality characterizing y as the resolvent of phi_i at x.
template <class P>
DeviProbeReport verify_devi(const SplitProblem<P>& prob, int which, double h,
                            const P& x, const P& y, std::span<const P> probes) {
  if (!(h > 0.0)) throw InvalidInput("verify_devi: h must be positive");
  if (probes.empty()) throw InvalidInput("verify_devi: need at least one probe");
  const Functional<P>& f = prob.functional(which);
  const Energy phi_y = f.energy(y);
  if (!phi_y.is_finite()) throw DomainViolation("verify_devi: y outside domain");
  const double dyx = prob.metric(y, x);

  DeviProbeReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Energy phi_z = f.energy(probes[i]);
    if (!phi_z.is_finite()) throw DomainViolation("verify_devi: probe outside domain");
    const double dyz = prob.metric(y, probes[i]);
    const double dxz = prob.metric(x, probes[i]);
    const double v = (dyz * dyz - dxz * dxz) / (2.0 * h) + dyx * dyx / (2.0 * h) +
                     phi_y.value() - phi_z.value();
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_index = i;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Per-step distance/energy inequalities
// ---------------------------------------------------------------------------

struct DiscreteEviResiduals {
  std::vector<double> quad;     // residual of the quadratic step inequality at w
  std::vector<double> special;  // residual of the w = x_{k-1} specialization
  double worst = 0.0;
};

// For each step k, residuals (positive = violation) of
//   (d^2(x_k,w) - d^2(x_{k-1},w))/(2 h_k)
//     <= phi(w) - phi(x_k) - d^2(x_k,x_{k-1})/(4 h_k) + delta_k
// and of
//   (3/(4 h_k)) d^2(x_k,x_{k-1}) <= phi(x_{k-1}) - phi(x_k) + delta_k.
template <class P>
DiscreteEviResiduals check_discrete_evi(const TrajectoryRecord<P>& traj,
                                        const SplitProblem<P>& prob, const P& w) {
  const Energy phi_w = prob.total_energy(w);
  if (!phi_w.is_finite()) throw DomainViolation("check_discrete_evi: w outside domain");

  DiscreteEviResiduals out;
  const std::size_t n = traj.size();
  out.quad.reserve(n);
  out.special.reserve(n);
  double dprev = prob.metric(traj.point(0), w);
  for (std::size_t k = 1; k <= n; ++k) {
    const double hk = traj.disc.step(k);
    const double dcur = prob.metric(traj.point(k), w);
    const double lhs = (dcur * dcur - dprev * dprev) / (2.0 * hk);
    const double rhs = phi_w.value() - traj.phi(k) -
                       traj.step_dist_sq[k - 1] / (4.0 * hk) + traj.delta[k - 1];
    out.quad.push_back(lhs - rhs);

    const double lhs_s = 0.75 * traj.step_dist_sq[k - 1] / hk;
    const double rhs_s = traj.phi(k - 1) - traj.phi(k) + traj.delta[k - 1];
    out.special.push_back(lhs_s - rhs_s);
    dprev = dcur;
  }
  out.worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    out.worst = std::max({out.worst, out.quad[i], out.special[i]});
  return out;
}

struct AprioriReport {
  double sum_lhs = 0.0;  // (3/4) sum_k d^2(x_k, x_{k-1})/h_k
  double sum_rhs = 0.0;  // phi(x_0) - phi(x_n) + Delta_n
  std::vector<double> energy_residual;  // phi(x_k) - phi(x_0) - Delta_k, per k
  double worst = 0.0;
};

// Summed step-distance estimate plus the per-k energy bound
// phi(x_k) <= phi(x_0) + Delta_k.
template <class P>
AprioriReport check_apriori(const TrajectoryRecord<P>& traj) {
  AprioriReport rep;
  const std::size_t n = traj.size();
  for (std::size_t k = 1; k <= n; ++k)
    rep.sum_lhs += traj.step_dist_sq[k - 1] / traj.disc.step(k);
  rep.sum_lhs *= 0.75;
  rep.sum_rhs = traj.phi(0) - traj.phi(n) + traj.Delta_total();

  rep.energy_residual.reserve(n);
  for (std::size_t k = 1; k <= n; ++k)
    rep.energy_residual.push_back(traj.phi(k) - traj.phi(0) - traj.Delta(k));

  rep.worst = rep.sum_lhs - rep.sum_rhs;
  for (double r : rep.energy_residual) rep.worst = std::max(rep.worst, r);
  return rep;
}

struct RIntegralRow {
  double lhs;  // integral over [0, t_k] of [r]^+, closed form per cell
  double rhs;  // mesh * (phi(x_0) - phi(x_k) + 2 Delta_k)
};

// The residual profile r is affine on each cell, so its positive part
// integrates in closed form cell by cell.
template <class P>
std::vector<RIntegralRow> check_r_integral(const TrajectoryRecord<P>& traj) {
  std::vector<RIntegralRow> rows;
  const std::size_t n = traj.size();
  rows.reserve(n);
  double acc = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double hk = traj.disc.step(k);
    const double quarter = traj.step_dist_sq[k - 1] / (4.0 * hk);
    const double left = traj.phi(k - 1) - traj.phi(k) + traj.delta[k - 1] - quarter;
    const double right = traj.delta[k - 1] - quarter;
    const double width = traj.disc.time(k) - traj.disc.time(k - 1);
    acc += positive_part_integral_affine(left, right, width);
    rows.push_back({acc, traj.disc.mesh() *
                             (traj.phi(0) - traj.phi(k) + 2.0 * traj.Delta(k))});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Recursive bound sequence
// ---------------------------------------------------------------------------

// Bounds A*beta*exp(beta*t_{n-1}) with beta = 1/(1 - max tau) and
// t_n = tau_1 + ... + tau_n, valid for any sequence satisfying
// a_n <= A + sum_{k<=n} tau_k a_k.
inline std::vector<double> gronwall_bound(double A, const std::vector<double>& taus) {
  if (!(A >= 0.0)) throw InvalidInput("gronwall_bound: A must be nonnegative");
  if (taus.empty()) throw InvalidInput("gronwall_bound: empty tau sequence");
  double m = 0.0;
  for (double t : taus) {
    if (!(t > 0.0)) throw InvalidInput("gronwall_bound: taus must be positive");
    m = std::max(m, t);
  }
  if (m >= 1.0) throw InvalidInput("gronwall_bound: max tau must be < 1");
  const double beta = 1.0 / (1.0 - m);
  std::vector<double> bounds;
  bounds.reserve(taus.size());
  double t_prev = 0.0;  // t_{n-1}
  for (std::size_t i = 0; i < taus.size(); ++i) {
    bounds.push_back(A * beta * std::exp(beta * t_prev));
    t_prev += taus[i];
  }
  return bounds;
}

// ---------------------------------------------------------------------------
// Growth-control certification for the cross term
// ---------------------------------------------------------------------------

// Which functional controls the per-step increase delta_k.
enum class ChiMode { Constant, Phi1, Phi2 };

struct A3Constants {
  double c = 0.0;      // additive rate (modes Constant, Phi2)
  double alpha = 0.0;  // exponential rate (modes Phi1, Phi2)
  double m = 1.0;      // informational: entropy exponent behind the constants
};

struct A3Report {
  double worst_step = -std::numeric_limits<double>::infinity();
  double worst_step_ii = -std::numeric_limits<double>::infinity();
  double delta_total = 0.0;     // Delta_n
  double delta_bound = 0.0;     // bound implied by the hypothesis
  double bound_residual = 0.0;  // delta_total - delta_bound
  double worst(bool include_bound = true) const {
    double w = std::max(worst_step, worst_step_ii);
    if (include_bound) w = std::max(w, bound_residual);
    return w;
  }
};

// Verifies the per-step hypothesis along the trajectory and the total bound
// on Delta_n it implies:
//   Constant: phi1(x_k) <= phi1(xhat_k) + c h_k,        Delta_n <= c t_n / 2
//   Phi1:     phi1(x_k) <= e^{alpha h_k} phi1(xhat_k),  Delta_n <= (e^{alpha t_n/2}-1) phi1(x_0)
//   Phi2:     phi1(x_k) <= phi1(xhat_k) + c h_k phi2(x_k)
//             phi2(xhat_k) <= e^{alpha h_k} phi2(x_{k-1})
//             Delta_n <= c phi2(x_0) * int_0^{t_n} e^{alpha s} ds
template <class P>
A3Report check_a3(const TrajectoryRecord<P>& traj, ChiMode mode,
                  const A3Constants& cst) {
  A3Report rep;
  const std::size_t n = traj.size();
  rep.delta_total = traj.Delta_total();
  const double T = traj.total_time();

  for (std::size_t k = 1; k <= n; ++k) {
    const double hk = traj.disc.step(k);
    const double p1_full = traj.phi1_full[k - 1];
    const double p1_half = traj.phi1_half[k - 1];
    double v = 0.0;
    switch (mode) {
      case ChiMode::Constant:
        v = p1_full - p1_half - cst.c * hk;
        break;
      case ChiMode::Phi1:
        if (p1_half < 0.0 || traj.phi1_x0 < 0.0)
          throw InvalidInput("check_a3: mode Phi1 requires phi1 >= 0");
        v = p1_full - std::exp(cst.alpha * hk) * p1_half;
        break;
      case ChiMode::Phi2: {
        const double p2_full = traj.phi2_full[k - 1];
        const double p2_prev = (k == 1) ? traj.phi2_x0 : traj.phi2_full[k - 2];
        if (p2_full < 0.0 || p2_prev < 0.0)
          throw InvalidInput("check_a3: mode Phi2 requires phi2 >= 0");
        v = p1_full - p1_half - cst.c * hk * p2_full;
        const Energy p2h = traj.phi2_half[k - 1];
        const double vii =
            p2h.is_finite()
                ? p2h.value() - std::exp(cst.alpha * hk) * p2_prev
                : std::numeric_limits<double>::infinity();
        rep.worst_step_ii = std::max(rep.worst_step_ii, vii);
        break;
      }
    }
    rep.worst_step = std::max(rep.worst_step, v);
  }

  switch (mode) {
    case ChiMode::Constant:
      rep.delta_bound = 0.5 * cst.c * T;
      break;
    case ChiMode::Phi1:
      rep.delta_bound = (std::exp(0.5 * cst.alpha * T) - 1.0) * traj.phi1_x0;
      break;
    case ChiMode::Phi2: {
      const double integral = (cst.alpha > 0.0)
                                  ? (std::exp(cst.alpha * T) - 1.0) / cst.alpha
                                  : T;
      rep.delta_bound = cst.c * traj.phi2_x0 * integral;
      break;
    }
  }
  rep.bound_residual = rep.delta_total - rep.delta_bound;
  return rep;
}

}  // namespace gfsplit
