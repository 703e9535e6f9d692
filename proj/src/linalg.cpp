#include "rcfpi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rcfpi {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::matvec(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    throw std::invalid_argument("Matrix::matvec: dimension mismatch");
  for (int i = 0; i < rows_; ++i) {
    double acc = 0.0;
    const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::fabs(v));
  return m;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(max_abs(a), 1e-300);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::fabs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
  return true;
}

namespace {

double off_diagonal_frobenius(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double off_tol, int max_sweeps) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix not square");
  if (!is_symmetric(input, 1e-10))
    throw std::invalid_argument("jacobi_eigen: matrix not symmetric");
  const int n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double scale = std::max(frobenius(a), 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_frobenius(a) <= off_tol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-3 * off_tol * scale / std::max(1, n)) continue;
        const double phi = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (phi >= 0 ? 1.0 : -1.0) / (std::fabs(phi) + std::sqrt(phi * phi + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return out.values[i] < out.values[j]; });
  std::vector<double> sorted(n);
  Matrix vs(n, n);
  for (int k = 0; k < n; ++k) {
    sorted[k] = out.values[order[k]];
    for (int r = 0; r < n; ++r) vs(r, k) = v(r, order[k]);
  }
  out.values = std::move(sorted);
  out.vectors = std::move(vs);
  return out;
}

Matrix sym_power(const SymmetricEigen& eig, double power, double floor_tol) {
  const int n = static_cast<int>(eig.values.size());
  double radius = 0.0;
  for (double lam : eig.values) radius = std::max(radius, std::fabs(lam));
  const double floor = floor_tol * std::max(radius, 1e-300);

  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) {
    double lam = eig.values[i];
    if (lam < -floor)
      throw std::domain_error("sym_power: negative eigenvalue in fractional power");
    if (lam <= floor) {
      if (power < 0) throw std::domain_error("sym_power: singular matrix in negative power");
      f[i] = 0.0;
    } else {
      f[i] = std::pow(lam, power);
    }
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += eig.vectors(i, k) * f[k] * eig.vectors(j, k);
      out(i, j) = acc;
      out(j, i) = acc;
    }
  return out;
}

double sym_min_eigenvalue(const Matrix& a) { return jacobi_eigen(a).values.front(); }

}  // namespace rcfpi
