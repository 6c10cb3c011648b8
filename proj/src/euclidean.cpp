#include "gfsplit/euclidean.hpp"

#include <cmath>
#include <utility>

#include "gfsplit/errors.hpp"

namespace gfsplit::euclidean {

QuadraticFunctional::QuadraticFunctional(linalg::Matrix A, Vec b, double c0)
    : A_(std::move(A)), b_(std::move(b)), c0_(c0) {
  if (A_.size() != b_.size())
    throw DimensionMismatch("QuadraticFunctional: A and b sizes differ");
  if (!A_.is_symmetric(0.0))
    throw InvalidInput("QuadraticFunctional: A must be exactly symmetric");
  if (A_.size() > 0 && linalg::min_eigenvalue(A_) < -1e-12)
    throw InvalidInput("QuadraticFunctional: A must be positive semidefinite");
  for (double v : b_)
    if (!std::isfinite(v)) throw InvalidInput("QuadraticFunctional: b not finite");
}

QuadraticFunctional QuadraticFunctional::isotropic(std::size_t dim, double curvature,
                                                   Vec b, double c0) {
  if (b.empty()) b.assign(dim, 0.0);
  return QuadraticFunctional(linalg::scale(linalg::Matrix::identity(dim), curvature),
                             std::move(b), c0);
}

double QuadraticFunctional::operator()(const Vec& x) const {
  if (x.size() != dim()) throw DimensionMismatch("QuadraticFunctional: point size");
  const Vec ax = linalg::matvec(A_, x);
  double v = c0_;
  for (std::size_t i = 0; i < x.size(); ++i) v += 0.5 * x[i] * ax[i] + b_[i] * x[i];
  return v;
}

Vec QuadraticFunctional::gradient(const Vec& x) const {
  Vec g = linalg::matvec(A_, x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += b_[i];
  return g;
}

double euclidean_distance(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("euclidean_distance: sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

Vec prox_quadratic(const QuadraticFunctional& f, double h, const Vec& x) {
  if (!(h > 0.0)) throw InvalidInput("prox_quadratic: h must be positive");
  if (x.size() != f.dim()) throw DimensionMismatch("prox_quadratic: point size");
  const std::size_t n = f.dim();
  linalg::Matrix m = linalg::add(linalg::Matrix::identity(n), linalg::scale(f.A(), h));
  Vec rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i] - h * f.b()[i];
  return linalg::cholesky_solve(m, rhs);
}

Vec exact_flow(const QuadraticFunctional& f1, const QuadraticFunctional& f2,
               const Vec& x0, double t) {
  if (f1.dim() != f2.dim() || x0.size() != f1.dim())
    throw DimensionMismatch("exact_flow: sizes differ");
  if (!(t >= 0.0)) throw InvalidInput("exact_flow: t must be nonnegative");
  const std::size_t n = f1.dim();
  const linalg::Matrix m = linalg::add(f1.A(), f2.A());
  const linalg::EigenSym eig = linalg::jacobi_eigensym(m);

  Vec bsum(n);
  for (std::size_t i = 0; i < n; ++i) bsum[i] = f1.b()[i] + f2.b()[i];

  // Stationary point in eigencoordinates, zero on the kernel of M.
  double lam_max = 0.0;
  for (double l : eig.eigenvalues) lam_max = std::max(lam_max, std::abs(l));
  const double lam_floor = 1e-12 * std::max(1.0, lam_max);

  Vec xs(n, 0.0), dev(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double qb = 0.0, qx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      qb += eig.q.at(i, j) * bsum[i];
      qx += eig.q.at(i, j) * x0[i];
    }
    xs[j] = (eig.eigenvalues[j] > lam_floor) ? -qb / eig.eigenvalues[j] : 0.0;
    dev[j] = qx - xs[j];
  }

  Vec out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = (eig.eigenvalues[j] > lam_floor) ? eig.eigenvalues[j] : 0.0;
    const double coef = xs[j] + std::exp(-t * lam) * dev[j];
    for (std::size_t i = 0; i < n; ++i) out[i] += eig.q.at(i, j) * coef;
  }
  return out;
}

SplitProblem<Vec> build_euclidean_problem(QuadraticFunctional f1,
                                          QuadraticFunctional f2) {
  if (f1.dim() != f2.dim())
    throw DimensionMismatch("build_euclidean_problem: dimensions differ");

  auto make = [](QuadraticFunctional f) {
    Functional<Vec> out;
    out.energy = [f](const Vec& x) -> Energy { return Energy(f(x)); };
    out.in_domain = [dim = f.dim()](const Vec& x) { return x.size() == dim; };
    out.resolvent = [f](double h, const Vec& x) -> ResolventResult<Vec> {
      Vec y = prox_quadratic(f, h, x);
      // Residual of (I + hA) y - (x - hb), reported as the certificate.
      const Vec g = f.gradient(y);
      double resid = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i)
        resid = std::max(resid, std::abs(y[i] + h * g[i] - x[i]));
      return {std::move(y), resid};
    };
    return out;
  };

  SplitProblem<Vec> prob;
  prob.metric = [](const Vec& a, const Vec& b) { return euclidean_distance(a, b); };
  prob.phi1 = make(std::move(f1));
  prob.phi2 = make(std::move(f2));
  return prob;
}

}  // namespace gfsplit::euclidean
