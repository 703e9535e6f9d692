#include "rcfpi/friedrichs.hpp"

#include <cmath>
#include <stdexcept>

namespace rcfpi {

namespace {

// Gram matrix B_a^T M B_b for bases given as lists of vectors.
Matrix gram(const std::vector<BlockVector>& a, const std::vector<BlockVector>& b,
            const Metric& m) {
  Matrix g(static_cast<int>(a.size()), static_cast<int>(b.size()));
  std::vector<double> mb(b.empty() ? 0 : b.front().data.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    m.apply(b[j].data, mb);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < mb.size(); ++c) s += a[i].data[c] * mb[c];
      g(static_cast<int>(i), static_cast<int>(j)) = s;
    }
  }
  return g;
}

}  // namespace

SubspacePair SubspacePair::checked(std::vector<BlockVector> basis_u1,
                                   std::vector<BlockVector> basis_u2, Metric metric) {
  if (basis_u1.empty() || basis_u2.empty())
    throw std::invalid_argument("SubspacePair: empty basis");
  const int n = basis_u1.front().dim();
  for (const auto& v : basis_u1)
    if (v.dim() != n) throw std::invalid_argument("SubspacePair: inconsistent dimensions");
  for (const auto& v : basis_u2)
    if (v.dim() != n) throw std::invalid_argument("SubspacePair: inconsistent dimensions");
  if (!metric.matches_dim(n))
    throw std::invalid_argument("SubspacePair: metric dimension mismatch");

  // combined Gram must be nonsingular: bases independent and trivial overlap
  std::vector<BlockVector> all = basis_u1;
  all.insert(all.end(), basis_u2.begin(), basis_u2.end());
  const SymmetricEigen eig = jacobi_eigen(gram(all, all, metric));
  if (eig.values.front() <= 1e-10 * std::max(std::fabs(eig.values.back()), 1e-300))
    throw std::invalid_argument(
        "SubspacePair: degenerate basis or nontrivial subspace intersection");

  SubspacePair pair;
  pair.basis_u1 = std::move(basis_u1);
  pair.basis_u2 = std::move(basis_u2);
  pair.metric = std::move(metric);
  return pair;
}

double friedrichs_cosine(const SubspacePair& pair) {
  const Matrix g11 = gram(pair.basis_u1, pair.basis_u1, pair.metric);
  const Matrix g22 = gram(pair.basis_u2, pair.basis_u2, pair.metric);
  const Matrix g12 = gram(pair.basis_u1, pair.basis_u2, pair.metric);

  const Matrix n1 = sym_power(jacobi_eigen(g11), -0.5);
  const Matrix n2 = sym_power(jacobi_eigen(g22), -0.5);
  const Matrix k = matmul(n1, matmul(g12, n2));
  // largest singular value via the eigen-solve of the symmetric square
  const Matrix kkt = matmul(k, transpose(k));
  const double lam = jacobi_eigen(kkt).values.back();
  double c = lam <= 0.0 ? 0.0 : std::sqrt(lam);
  return std::min(c, 1.0);
}

double convergence_threshold(double theta, double alpha) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("convergence_threshold: theta must be in (0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("convergence_threshold: alpha must be in (0,1]");
  return std::sqrt((1.0 - theta) / (1.0 - alpha * theta));
}

ThresholdVerdict classify_friedrichs(double c_f, double theta, double alpha, double tol) {
  const double thr = convergence_threshold(theta, alpha);
  if (c_f < thr - tol) return ThresholdVerdict::strict;
  if (c_f <= thr + tol) return ThresholdVerdict::boundary;
  return ThresholdVerdict::fail;
}

EigenvalueCondition check_eigenvalue_condition(const Matrix& w, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("check_eigenvalue_condition: alpha must be in (0,1]");
  if (!is_symmetric(w, 1e-12))
    throw std::invalid_argument("check_eigenvalue_condition: W is not symmetric");
  EigenvalueCondition out;
  out.lambda_min = sym_min_eigenvalue(w);
  out.threshold = -alpha / (2.0 - alpha);
  out.margin = out.lambda_min - out.threshold;
  out.pass = out.margin > 0.0;
  return out;
}

}  // namespace rcfpi
