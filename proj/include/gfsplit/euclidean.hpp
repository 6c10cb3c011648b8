#pragma once

#include <cstddef>
#include <vector>

#include "gfsplit/linalg.hpp"
#include "gfsplit/problem.hpp"

namespace gfsplit::euclidean {

using Vec = std::vector<double>;

// Convex quadratic x -> x'Ax/2 + b'x + c0 with A symmetric positive
// semidefinite (eigenvalue floor -1e-12 enforced at construction).
class QuadraticFunctional {
 public:
  QuadraticFunctional(linalg::Matrix A, Vec b, double c0 = 0.0);

  static QuadraticFunctional isotropic(std::size_t dim, double curvature,
                                       Vec b = {}, double c0 = 0.0);

  double operator()(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  const linalg::Matrix& A() const { return A_; }
  const Vec& b() const { return b_; }
  double c0() const { return c0_; }
  std::size_t dim() const { return b_.size(); }

 private:
  linalg::Matrix A_;
  Vec b_;
  double c0_;
};

double euclidean_distance(const Vec& x, const Vec& y);

// Closed-form resolvent: the solution of (I + hA) y = x - h b.
Vec prox_quadratic(const QuadraticFunctional& f, double h, const Vec& x);

// Flow of the sum functional: u(t) = exp(-tM)(x0 - x*) + x* with M = A1 + A2
// and M x* = -(b1 + b2) (pseudo-solution on the kernel of M).
Vec exact_flow(const QuadraticFunctional& f1, const QuadraticFunctional& f2,
               const Vec& x0, double t);

SplitProblem<Vec> build_euclidean_problem(QuadraticFunctional f1,
                                          QuadraticFunctional f2);

}  // namespace gfsplit::euclidean
