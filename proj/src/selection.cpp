#include "rcfpi/selection.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rcfpi/linalg.hpp"

namespace rcfpi {

namespace {

constexpr double kUniformTol = 1e-12;
constexpr std::size_t kEnumerationCap = 1000000;

void check_beta_lower_bound(double beta, double alpha, const char* where) {
  // beta >= alpha^2 always (Jensen); a violation means a broken enumeration
  if (beta < alpha * alpha - 1e-12)
    throw std::logic_error(std::string(where) + ": beta below alpha^2");
}

}  // namespace

SelectionDistribution::SelectionDistribution(std::vector<SelectionVector> support,
                                             std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) throw std::invalid_argument("SelectionDistribution: empty support");
  m_ = support_.front().size();
  double total = 0.0;
  cumulative_.reserve(probs_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i].size() != m_)
      throw std::invalid_argument("SelectionDistribution: inconsistent selection lengths");
    if (!(probs_[i] >= 0.0))
      throw std::invalid_argument("SelectionDistribution: negative probability");
    total += probs_[i];
    cumulative_.push_back(total);
  }
  if (std::fabs(total - 1.0) > kUniformTol)
    throw std::invalid_argument("SelectionDistribution: probabilities do not sum to 1");
  cumulative_.back() = 1.0;
  alpha_ = validate_uniform_step(*this);
}

SelectionDistribution SelectionDistribution::uniform_single_coordinate(int m) {
  if (m < 1) throw std::invalid_argument("uniform_single_coordinate: m must be >= 1");
  std::vector<SelectionVector> support;
  support.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) support.push_back(SelectionVector::unit(m, i));
  std::vector<double> probs(static_cast<std::size_t>(m), 1.0 / m);
  return SelectionDistribution(std::move(support), std::move(probs));
}

SelectionDistribution SelectionDistribution::finite_support(
    std::vector<std::pair<SelectionVector, double>> atoms) {
  std::vector<SelectionVector> support;
  std::vector<double> probs;
  support.reserve(atoms.size());
  probs.reserve(atoms.size());
  for (auto& [vec, p] : atoms) {
    support.push_back(std::move(vec));
    probs.push_back(p);
  }
  return SelectionDistribution(std::move(support), std::move(probs));
}

SelectionDistribution SelectionDistribution::deterministic(SelectionVector v) {
  std::vector<SelectionVector> support;
  support.push_back(std::move(v));
  return SelectionDistribution(std::move(support), {1.0});
}

const SelectionVector& SelectionDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform();
  // support sizes are small; a linear walk keeps the draw order obvious
  for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i)
    if (u < cumulative_[i]) return support_[i];
  return support_.back();
}

double validate_uniform_step(const SelectionDistribution& dist) {
  const int m = dist.block_count();
  std::vector<double> expectation(static_cast<std::size_t>(m), 0.0);
  for (std::size_t s = 0; s < dist.support_size(); ++s) {
    const double p = dist.prob(s);
    const auto& entries = dist.atom(s).entries;
    for (int i = 0; i < m; ++i) expectation[static_cast<std::size_t>(i)] += p * entries[i];
  }
  const double alpha = expectation.front();
  std::vector<int> offending;
  for (int i = 0; i < m; ++i)
    if (std::fabs(expectation[static_cast<std::size_t>(i)] - alpha) > kUniformTol)
      offending.push_back(i);
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "uniform expected step-size condition violated at coordinates";
    for (int i : offending) msg << ' ' << i;
    throw std::invalid_argument(msg.str());
  }
  if (!(alpha > 0.0))
    throw std::invalid_argument("uniform expected step-size condition: alpha must be positive");
  return alpha;
}

double beta_orthonormal(const SelectionDistribution& dist, const Metric& context) {
  if (context.kind() != Metric::Kind::identity)
    throw std::invalid_argument("beta_orthonormal: valid only for the identity metric");
  const double beta = dist.alpha();
  check_beta_lower_bound(beta, dist.alpha(), "beta_orthonormal");
  return beta;
}

namespace {

// max generalized eigenvalue of (Q, M) where Q = E[P^T M P] for the diagonal
// per-block scaling P drawn from the distribution. `scale_of_block(s, b)`
// gives P's scaling for block b under atom s.
template <typename ScaleFn>
double enumerated_beta(const SelectionDistribution& dist, const Metric& m,
                       const BlockLayout& layout, ScaleFn scale_of_block, double alpha) {
  if (dist.support_size() * static_cast<std::size_t>(layout.blocks()) > kEnumerationCap)
    throw std::invalid_argument("beta_exact_enumeration: support too large to enumerate");
  const int n = layout.total_dim();
  if (!m.matches_dim(n))
    throw std::invalid_argument("beta_exact_enumeration: metric dimension mismatch");

  // expand per-block scales to per-coordinate diagonals
  std::vector<double> diag(static_cast<std::size_t>(n));
  Matrix mm(n, n);
  if (m.kind() == Metric::Kind::dense) {
    mm = m.dense_matrix();
  } else {
    for (int i = 0; i < n; ++i)
      mm(i, i) = (m.kind() == Metric::Kind::diagonal) ? m.weights()[static_cast<std::size_t>(i)]
                                                      : 1.0;
  }

  Matrix q(n, n);
  for (std::size_t s = 0; s < dist.support_size(); ++s) {
    const double p = dist.prob(s);
    if (p == 0.0) continue;
    for (int b = 0; b < layout.blocks(); ++b) {
      const double sc = scale_of_block(s, b);
      for (int i = layout.offset(b); i < layout.offset(b) + layout.dim(b); ++i)
        diag[static_cast<std::size_t>(i)] = sc;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        q(i, j) += p * diag[static_cast<std::size_t>(i)] * mm(i, j) *
                   diag[static_cast<std::size_t>(j)];
  }

  const Matrix inv_sqrt = sym_power(jacobi_eigen(mm), -0.5);
  const Matrix w = matmul(inv_sqrt, matmul(q, inv_sqrt));
  const double beta = jacobi_eigen(w).values.back();
  check_beta_lower_bound(beta, alpha, "beta_exact_enumeration");
  return beta;
}

}  // namespace

double beta_exact_enumeration(const SelectionDistribution& dist, const Metric& m,
                              const BlockLayout& layout) {
  if (layout.blocks() != dist.block_count())
    throw std::invalid_argument("beta_exact_enumeration: block count mismatch");
  return enumerated_beta(
      dist, m, layout, [&](std::size_t s, int b) { return dist.atom(s).entries[b]; },
      dist.alpha());
}

double beta_exact_enumeration_with_g_block(const SelectionDistribution& dist, const Metric& m,
                                           const BlockLayout& layout, int g_block,
                                           double alpha_for_g) {
  if (layout.blocks() != dist.block_count() + 1)
    throw std::invalid_argument("beta_exact_enumeration: layout must add one g block");
  if (g_block < 0 || g_block >= layout.blocks())
    throw std::invalid_argument("beta_exact_enumeration: invalid g block index");
  return enumerated_beta(
      dist, m, layout,
      [&](std::size_t s, int b) {
        if (b == g_block) return alpha_for_g;
        const int masked = (b < g_block) ? b : b - 1;
        return dist.atom(s).entries[masked];
      },
      dist.alpha());
}

double beta_from_friedrichs(double alpha, double c_f) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("beta_from_friedrichs: alpha must be in (0,1]");
  if (!(c_f >= 0.0 && c_f < 1.0))
    throw std::invalid_argument("beta_from_friedrichs: cosine must be in [0,1)");
  const double beta = alpha * alpha + (alpha - alpha * alpha) / (1.0 - c_f * c_f);
  check_beta_lower_bound(beta, alpha, "beta_from_friedrichs");
  return beta;
}

}  // namespace rcfpi
