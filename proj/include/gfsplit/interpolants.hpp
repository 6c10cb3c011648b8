#pragma once

#include <cstddef>
#include <utility>

#include "gfsplit/problem.hpp"
#include "gfsplit/trajectory.hpp"

namespace gfsplit {

// Step paths through (t_k, x_k): underline is right-continuous (value x_{k-1}
// on [t_{k-1}, t_k)), overline is left-continuous (value x_k on (t_{k-1}, t_k]).
template <class P>
std::pair<const P&, const P&> piecewise_paths(const TrajectoryRecord<P>& traj, double t) {
  const Discretisation& disc = traj.disc;
  disc.require_in_range(t);
  if (t == disc.total_time())
    return {traj.point(traj.size()), traj.point(traj.size())};
  const std::size_t k = disc.cell(t);
  if (t == disc.time(k - 1)) return {traj.point(k - 1), traj.point(k - 1)};
  return {traj.point(k - 1), traj.point(k)};
}

// The three continuous interpolants at (t, y): the blended squared distance,
// the blended energy, and the residual profile r whose positive part controls
// the distance to the limit flow. r is affine on each cell [t_{k-1}, t_k),
// running from
//   phi(x_{k-1}) - phi(x_k) + delta_k - d^2(x_k, x_{k-1})/(4 h_k)
// at the left edge to
//   delta_k - d^2(x_k, x_{k-1})/(4 h_k)
// at the right limit; by convention r(t_n) = 0.
struct InterpolantValues {
  double dist_sq;
  double phi;
  double r;
};

template <class P>
InterpolantValues interpolants(const TrajectoryRecord<P>& traj,
                               const SplitProblem<P>& prob, double t, const P& y) {
  const Discretisation& disc = traj.disc;
  disc.require_in_range(t);
  const double l = disc.ell(t);
  auto [under, over] = piecewise_paths(traj, t);

  const double du = prob.metric(under, y);
  const double dov = prob.metric(over, y);

  InterpolantValues out{};
  out.dist_sq = (1.0 - l) * du * du + l * dov * dov;

  // Indices of the step points the two paths sit on.
  std::size_t k_under = 0, k_over = 0;
  if (t == disc.total_time()) {
    k_under = k_over = traj.size();
  } else {
    const std::size_t k = disc.cell(t);
    k_under = k - 1;
    k_over = (t == disc.time(k - 1)) ? k - 1 : k;
  }
  out.phi = (1.0 - l) * traj.phi(k_under) + l * traj.phi(k_over);

  if (t == disc.total_time()) {
    out.r = 0.0;
  } else {
    const std::size_t k = disc.cell(t);
    const double hk = disc.step(k);
    const double quarter = traj.step_dist_sq[k - 1] / (4.0 * hk);
    const double left = traj.phi(k - 1) - traj.phi(k) + traj.delta[k - 1] - quarter;
    const double right = traj.delta[k - 1] - quarter;
    out.r = (1.0 - l) * left + l * right;
  }
  return out;
}

// Integral over a cell of width w of the positive part of the affine
// function running from a at the left edge to b at the right edge.
inline double positive_part_integral_affine(double a, double b, double w) {
  if (a >= 0.0 && b >= 0.0) return 0.5 * (a + b) * w;
  if (a <= 0.0 && b <= 0.0) return 0.0;
  if (a > 0.0) return 0.5 * w * a * a / (a - b);  // crosses zero going down
  return 0.5 * w * b * b / (b - a);               // crosses zero going up
}

}  // namespace gfsplit
