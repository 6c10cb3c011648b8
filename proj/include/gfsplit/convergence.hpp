#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "gfsplit/interpolants.hpp"
#include "gfsplit/trajectory.hpp"

namespace gfsplit {

// The scheme clock charges h per resolvent application (2h per step), so the
// continuous flow the scheme approximates runs at half the clock.
inline double flow_time_of(double scheme_time) { return 0.5 * scheme_time; }

struct ConvergenceRow {
  std::size_t n = 0;
  double mesh = 0.0;
  double sup_error = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double fitted_slope = 0.0;  // least-squares slope of log(error) vs log(mesh)
};

// Sup-distance of the left-continuous step path to a reference path, sampled
// on a uniform grid over [0, T]. reference takes the scheme clock.
template <class P>
double sup_path_error(const TrajectoryRecord<P>& traj, const SplitProblem<P>& prob,
                      const std::function<P(double)>& reference, double T,
                      std::size_t n_eval) {
  double worst = 0.0;
  for (std::size_t i = 0; i <= n_eval; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(n_eval);
    auto [under, over] = piecewise_paths(traj, t);
    (void)under;
    worst = std::max(worst, prob.metric(over, reference(t)));
  }
  return worst;
}

// Runs the scheme with uniform grids of the given sizes over [0, T] and
// tabulates sup-path errors against the reference. With no reference, the
// run with the largest count serves as reference and is dropped from the
// table. The fitted rate is reported in the mesh.
template <class P>
ConvergenceTable trotter_convergence_study(const SplitProblem<P>& prob, const P& x0,
                                           double T,
                                           std::vector<std::size_t> step_counts,
                                           std::function<P(double)> reference = {},
                                           std::size_t n_eval = 512) {
  if (step_counts.size() < 2)
    throw InvalidInput("trotter_convergence_study: need at least two step counts");
  for (std::size_t i = 1; i < step_counts.size(); ++i)
    if (step_counts[i] <= step_counts[i - 1])
      throw InvalidInput("trotter_convergence_study: step counts must increase");

  std::vector<TrajectoryRecord<P>> runs;
  runs.reserve(step_counts.size());
  for (std::size_t n : step_counts)
    runs.push_back(run_scheme(prob, x0, Discretisation::uniform(T, n)));

  std::size_t table_len = step_counts.size();
  if (!reference) {
    const TrajectoryRecord<P>* finest = &runs.back();
    reference = [finest](double t) { return piecewise_paths(*finest, t).second; };
    table_len -= 1;
  }

  ConvergenceTable table;
  for (std::size_t i = 0; i < table_len; ++i) {
    ConvergenceRow row;
    row.n = step_counts[i];
    row.mesh = runs[i].disc.mesh();
    row.sup_error = sup_path_error(runs[i], prob, reference, T, n_eval);
    table.rows.push_back(row);
  }

  // Least squares on the rows with strictly positive error.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (const auto& row : table.rows) {
    if (!(row.sup_error > 0.0)) continue;
    const double x = std::log(row.mesh);
    const double y = std::log(row.sup_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    const double denom = static_cast<double>(cnt) * sxx - sx * sx;
    table.fitted_slope = (static_cast<double>(cnt) * sxy - sx * sy) / denom;
  }
  return table;
}

}  // namespace gfsplit
