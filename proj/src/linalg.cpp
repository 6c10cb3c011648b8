#include "gfsplit/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "gfsplit/errors.hpp"

namespace gfsplit::linalg {

bool Matrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
  return true;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw DimensionMismatch("linalg::add: sizes differ");
  Matrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out.at(i, j) = s * a.at(i, j);
  return out;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (a.size() != x.size()) throw DimensionMismatch("linalg::matvec: sizes differ");
  Vec y(x.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) y[i] += a.at(i, j) * x[j];
  return y;
}

Vec cholesky_solve(const Matrix& a, const Vec& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DimensionMismatch("cholesky_solve: sizes differ");
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0)) throw SingularSystem("cholesky_solve: matrix not positive definite");
    l.at(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = s / l.at(j, j);
    }
  }
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * y[k];
    y[i] = s / l.at(i, i);
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * x[k];
    x[ii] = s / l.at(ii, ii);
  }
  return x;
}

EigenSym jacobi_eigensym(const Matrix& a_in) {
  const std::size_t n = a_in.size();
  Matrix a = a_in;
  Matrix q = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a.at(i, j)));
  const double stop = std::max(1e-300, 1e-15 * scale * static_cast<double>(n));

  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apq = a.at(p, r);
        if (apq == 0.0) continue;
        const double theta = (a.at(r, r) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akr = a.at(k, r);
          a.at(k, p) = c * akp - s * akr;
          a.at(k, r) = s * akp + c * akr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double ark = a.at(r, k);
          a.at(p, k) = c * apk - s * ark;
          a.at(r, k) = s * apk + c * ark;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = q.at(k, p);
          const double qkr = q.at(k, r);
          q.at(k, p) = c * qkp - s * qkr;
          q.at(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }

  EigenSym out;
  out.q = q;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a.at(i, i);
  return out;
}

double min_eigenvalue(const Matrix& a) {
  const EigenSym e = jacobi_eigensym(a);
  return *std::min_element(e.eigenvalues.begin(), e.eigenvalues.end());
}

}  // namespace gfsplit::linalg
