#pragma once

#include <span>
#include <vector>

namespace rcfpi {

/// Dense row-major matrix. Everything in this project is desk scale
/// (dimension at most a few hundred), so no sparse or blocked storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<const double> row(int i) const {
    return std::span<const double>(a_).subspan(static_cast<std::size_t>(i) * cols_, cols_);
  }
  const std::vector<double>& data() const { return a_; }

  /// y = A x
  void matvec(std::span<const double> x, std::span<double> y) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);
double max_abs(const Matrix& a);

/// Eigendecomposition of a symmetric matrix; values ascending, eigenvectors
/// stored as the columns of `vectors`.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi rotation sweeps. Stops when the off-diagonal Frobenius norm
/// drops below off_tol relative to the matrix scale.
SymmetricEigen jacobi_eigen(const Matrix& a, double off_tol = 1e-12, int max_sweeps = 100);

/// V f(lambda) V^T for f(x) = x^power. Eigenvalues below `floor_tol` times the
/// spectral radius are treated as zero (negative powers reject them).
Matrix sym_power(const SymmetricEigen& eig, double power, double floor_tol = 1e-13);

double sym_min_eigenvalue(const Matrix& a);

}  // namespace rcfpi
