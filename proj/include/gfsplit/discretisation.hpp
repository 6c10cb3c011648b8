#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "gfsplit/errors.hpp"

namespace gfsplit {

// Finite sequence of positive step sizes h_1..h_n together with the time
// grid t_0 = 0, t_k = 2*(h_1 + ... + h_k). One scheme step applies both
// resolvents with parameter h_k; the clock charges h_k per resolvent
// application, so the grid advances by 2*h_k per step.
class Discretisation {
 public:
  explicit Discretisation(std::vector<double> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw InvalidInput("Discretisation: empty step list");
    times_.resize(steps_.size() + 1);
    times_[0] = 0.0;
    double sum = 0.0;
    mesh_ = 0.0;
    min_step_ = steps_[0];
    for (std::size_t k = 0; k < steps_.size(); ++k) {
      const double h = steps_[k];
      if (!(h > 0.0) || !std::isfinite(h))
        throw InvalidInput("Discretisation: steps must be positive and finite");
      sum += h;
      times_[k + 1] = 2.0 * sum;
      mesh_ = std::max(mesh_, h);
      min_step_ = std::min(min_step_, h);
    }
  }

  // Uniform grid with n steps and total time t_n = T, i.e. h = T/(2n).
  static Discretisation uniform(double T, std::size_t n) {
    if (!(T > 0.0) || n == 0) throw InvalidInput("Discretisation::uniform: need T > 0, n >= 1");
    return Discretisation(std::vector<double>(n, T / (2.0 * static_cast<double>(n))));
  }

  std::size_t size() const { return steps_.size(); }
  const std::vector<double>& steps() const { return steps_; }

  // h_k, 1-based step index.
  double step(std::size_t k) const {
    if (k < 1 || k > steps_.size()) throw OutOfRange("Discretisation::step: index");
    return steps_[k - 1];
  }

  // t_k for k in [0, n].
  double time(std::size_t k) const {
    if (k > steps_.size()) throw OutOfRange("Discretisation::time: index");
    return times_[k];
  }

  double total_time() const { return times_.back(); }
  double mesh() const { return mesh_; }
  double min_step() const { return min_step_; }

  // 1-based k with t in [t_{k-1}, t_k), defined on [0, t_n).
  std::size_t cell(double t) const {
    require_in_range(t);
    if (t == total_time()) throw OutOfRange("Discretisation::cell: t at right endpoint");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin());
  }

  // Piecewise-affine sawtooth: 0 at every grid point, left-limit 1 at t_k.
  double ell(double t) const {
    require_in_range(t);
    if (t == total_time()) return 0.0;
    const std::size_t k = cell(t);
    return (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
  }

  void require_in_range(double t) const {
    if (!(t >= 0.0) || !(t <= total_time()))
      throw OutOfRange("time outside [0, t_n]");
  }

 private:
  std::vector<double> steps_;
  std::vector<double> times_;  // size n+1
  double mesh_ = 0.0;
  double min_step_ = 0.0;
};

inline double ell(const Discretisation& disc, double t) { return disc.ell(t); }

}  // namespace gfsplit
