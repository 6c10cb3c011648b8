#pragma once

#include <cstddef>
#include <vector>

namespace gfsplit::linalg {

using Vec = std::vector<double>;

// Dense square matrix, row-major. Sized for desk-scale problems.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static Matrix diagonal(const Vec& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  bool is_symmetric(double tol = 0.0) const;

 private:
  std::size_t n_ = 0;
  Vec a_;
};

Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Vec matvec(const Matrix& a, const Vec& x);

// Solves A x = b for symmetric positive definite A by Cholesky; throws
// SingularSystem when a pivot degenerates.
Vec cholesky_solve(const Matrix& a, const Vec& b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix: A = Q diag(w) Q^T.
struct EigenSym {
  Matrix q;       // columns are eigenvectors
  Vec eigenvalues;
};
EigenSym jacobi_eigensym(const Matrix& a);

// Smallest eigenvalue (via jacobi_eigensym); used for semidefiniteness checks.
double min_eigenvalue(const Matrix& a);

}  // namespace gfsplit::linalg
