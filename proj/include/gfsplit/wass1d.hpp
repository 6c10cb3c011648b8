#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gfsplit/problem.hpp"

namespace gfsplit::wass1d {

// Gaps at or below this floor make a quantile vector invalid.
inline constexpr double kGapFloor = 1e-300;

// Newton settings shared by both iterative resolvents.
inline constexpr double kSolverTol = 1e-10;
inline constexpr int kMaxNewtonIterations = 200;
inline constexpr double kBoundaryDamping = 0.99;  // fraction-to-boundary factor

// A probability measure on the line with finite second moment, stored as the
// strictly increasing vector of cell-center quantiles x_i = X((2i-1)/(2N)),
// carrying mass 1/N per cell.
class QuantileDensity {
 public:
  explicit QuantileDensity(std::vector<double> values);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  const std::vector<double>& values() const { return q_; }

  double min_gap() const;
  double mean() const;
  double second_moment() const;

  static double cell_center(std::size_t i, std::size_t n) {
    return (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
  }

 private:
  std::vector<double> q_;
};

// Convex C^2 potential with second derivative bounded above by c.
struct PotentialSpec {
  std::function<double(double)> v;
  std::function<double(double)> dv;
  std::function<double(double)> d2v;
  double laplacian_bound = 0.0;  // c, with d2v(x) <= c everywhere

  static PotentialSpec quadratic(double curvature);  // x -> curvature x^2 / 2
  static PotentialSpec zero();
  static PotentialSpec log_cosh();
};

struct PotentialValidation {
  double worst_d2v_low = 0.0;   // most negative sampled second derivative
  double worst_d2v_high = 0.0;  // largest sampled excess over the bound
  double worst_dv_fd = 0.0;     // worst |dv - central difference of v|
};
PotentialValidation validate_potential(const PotentialSpec& pot, double lo,
                                       double hi, std::size_t n_probe);

// Internal energy: Boltzmann (density log density) or the power form with
// exponent m in (1, 4].
class EntropyKind {
 public:
  enum class Tag { Boltzmann, Renyi };

  static EntropyKind boltzmann() { return EntropyKind(Tag::Boltzmann, 1.0); }
  static EntropyKind renyi(double m);

  Tag tag() const { return tag_; }
  double m() const { return m_; }
  bool is_renyi() const { return tag_ == Tag::Renyi; }
  std::string name() const;

 private:
  EntropyKind(Tag tag, double m) : tag_(tag), m_(m) {}
  Tag tag_;
  double m_;
};

// Exact transport distance of two equally sized quantile vectors:
// sqrt((1/N) sum (x_i - y_i)^2).
double w2_distance(const QuantileDensity& mu, const QuantileDensity& nu);

// (1/N) sum V(x_i).
double potential_energy(const QuantileDensity& mu, const PotentialSpec& pot);

// Boltzmann: -(1/(N-1)) sum log(N gap_i);
// power form: (1/((m-1)(N-1))) sum (N gap_i)^{1-m}.
double entropy(const QuantileDensity& mu, const EntropyKind& kind);

struct PotentialResolventResult {
  QuantileDensity point;
  double certificate = 0.0;  // max_i |y_i + h V'(y_i) - x_i|
};

// Componentwise solve of y + h V'(y) = x_i (safeguarded Newton); equals the
// pushforward of the quantiles under the scalar resolvent of V.
PotentialResolventResult resolvent_potential(const QuantileDensity& mu,
                                             const PotentialSpec& pot, double h);

struct EntropyResolventResult {
  QuantileDensity point;
  double certificate = 0.0;  // displacement-scale stationarity residual
  int iterations = 0;
};

// Minimizer of entropy(., kind) + w2^2(., mu)/(2h) over strictly increasing
// vectors. Damped Newton with a tridiagonal Hessian solve; steps are scaled
// so no gap shrinks below 1% of its current value per iteration.
EntropyResolventResult resolvent_entropy(const QuantileDensity& mu,
                                         const EntropyKind& kind, double h);

// Max over interior cells of the transport optimality residual
//   (y_i - x_i) - h N [f'(gap_i) - f'(gap_{i-1})]
// where f is the per-gap entropy integrand; zero at the exact minimizer.
double check_transport_optimality(const QuantileDensity& mu_out,
                                  const QuantileDensity& mu_in,
                                  const EntropyKind& kind, double h);

struct CompatibilityLine {
  std::string name;
  bool applicable = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool holds = true;
  double slack() const { return rhs - lhs; }
};

struct CompatibilityReport {
  CompatibilityLine lines[4];
  bool all_hold() const {
    for (const auto& l : lines)
      if (l.applicable && !l.holds) return false;
    return true;
  }
};

// The four resolvent/energy estimates coupling the potential energy with the
// two internal energies:
//   [0] H(J^V mu) <= H(mu) + c h
//   [1] V(J^H mu) <= V(mu) + c h
//   [2] F(J^V mu) <= e^{(m-1) c h} F(mu)
//   [3] V(J^F mu) <= V(mu) + c (m-1) h F(J^F mu)
// [0],[1] always run; [2],[3] need a power-form kind for m.
CompatibilityReport check_compatibility(const QuantileDensity& mu,
                                        const PotentialSpec& pot,
                                        const EntropyKind& kind, double h);

enum class Order { EntropyFirst, PotentialFirst };

// Split problem on quantile vectors with metric w2_distance and the
// (entropy, potential) pair in the requested order.
SplitProblem<QuantileDensity> build_wasserstein_problem(PotentialSpec pot,
                                                        EntropyKind kind,
                                                        Order order);

// Cell-center quantiles of N(mean, sigma^2).
QuantileDensity quantile_of_gaussian(double mean, double sigma, std::size_t n);

// Cell-center quantiles of a Gaussian mixture (weights need not be
// normalized); CDF inverted by bisection refined with Newton.
struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sigma = 1.0;
};
QuantileDensity quantile_of_mixture(const std::vector<GaussianComponent>& comps,
                                    std::size_t n);

}  // namespace gfsplit::wass1d
