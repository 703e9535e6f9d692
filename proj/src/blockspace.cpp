#include "rcfpi/blockspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcfpi {

BlockLayout::BlockLayout(std::vector<int> block_dims) : dims_(std::move(block_dims)) {
  if (dims_.empty()) throw std::invalid_argument("BlockLayout: no blocks");
  offsets_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) throw std::invalid_argument("BlockLayout: block dimension must be >= 1");
    offsets_.push_back(total_);
    total_ += d;
  }
}

BlockLayout BlockLayout::scalar(int n) {
  return BlockLayout(std::vector<int>(static_cast<std::size_t>(n), 1));
}

BlockVector::BlockVector(BlockLayout l)
    : layout(std::move(l)), data(static_cast<std::size_t>(layout.total_dim()), 0.0) {}

BlockVector::BlockVector(BlockLayout l, std::vector<double> values)
    : layout(std::move(l)), data(std::move(values)) {
  if (static_cast<int>(data.size()) != layout.total_dim())
    throw std::invalid_argument("BlockVector: data length does not match layout");
}

BlockVector BlockVector::scalar_blocks(std::vector<double> values) {
  BlockLayout l = BlockLayout::scalar(static_cast<int>(values.size()));
  return BlockVector(std::move(l), std::move(values));
}

namespace {
void require_same_layout(const BlockVector& a, const BlockVector& b, const char* op) {
  if (a.layout != b.layout)
    throw std::invalid_argument(std::string(op) + ": block layouts differ");
}
}  // namespace

BlockVector operator+(const BlockVector& a, const BlockVector& b) {
  require_same_layout(a, b, "BlockVector+");
  BlockVector out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

BlockVector operator-(const BlockVector& a, const BlockVector& b) {
  require_same_layout(a, b, "BlockVector-");
  BlockVector out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

BlockVector operator*(double s, const BlockVector& a) {
  BlockVector out = a;
  for (double& v : out.data) v *= s;
  return out;
}

SelectionVector::SelectionVector(std::vector<double> e) : entries(std::move(e)) {
  for (double v : entries)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("SelectionVector: entry outside [0,1]");
}

SelectionVector SelectionVector::all_ones(int m) {
  return SelectionVector(std::vector<double>(static_cast<std::size_t>(m), 1.0));
}

SelectionVector SelectionVector::unit(int m, int i) {
  std::vector<double> e(static_cast<std::size_t>(m), 0.0);
  e.at(static_cast<std::size_t>(i)) = 1.0;
  return SelectionVector(std::move(e));
}

Metric Metric::identity(int dim) {
  Metric m;
  m.kind_ = Kind::identity;
  m.dim_ = dim;
  return m;
}

Metric Metric::diagonal(std::vector<double> weights) {
  Metric m;
  m.kind_ = Kind::diagonal;
  m.dim_ = static_cast<int>(weights.size());
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("Metric::diagonal: weights must be positive");
  m.weights_ = std::move(weights);
  return m;
}

Metric Metric::dense(Matrix mat) {
  if (mat.rows() != mat.cols())
    throw std::invalid_argument("Metric::dense: matrix not square");
  if (!is_symmetric(mat, 1e-12))
    throw std::invalid_argument("Metric::dense: matrix not symmetric within 1e-12");
  const SymmetricEigen eig = jacobi_eigen(mat);
  if (eig.values.front() <= 0.0)
    throw std::invalid_argument("Metric::dense: matrix not positive definite");
  Metric m;
  m.kind_ = Kind::dense;
  m.dim_ = mat.rows();
  m.dense_ = std::move(mat);
  return m;
}

double Metric::inner(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size() || !matches_dim(static_cast<int>(x.size())))
    throw std::invalid_argument("Metric::inner: dimension mismatch");
  switch (kind_) {
    case Kind::identity: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
      return s;
    }
    case Kind::diagonal: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * weights_[i] * y[i];
      return s;
    }
    case Kind::dense: {
      double s = 0.0;
      const int n = dense_.rows();
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += dense_(i, j) * y[j];
        s += x[i] * row;
      }
      return s;
    }
  }
  return 0.0;
}

double Metric::norm(std::span<const double> x) const {
  const double q = inner(x, x);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

void Metric::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != out.size() || !matches_dim(static_cast<int>(x.size())))
    throw std::invalid_argument("Metric::apply: dimension mismatch");
  switch (kind_) {
    case Kind::identity:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
      return;
    case Kind::diagonal:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = weights_[i] * x[i];
      return;
    case Kind::dense:
      dense_.matvec(x, out);
      return;
  }
}

double m_inner(const BlockVector& x, const BlockVector& y, const Metric& m) {
  if (x.layout != y.layout) throw std::invalid_argument("m_inner: block layouts differ");
  return m.inner(x.data, y.data);
}

double m_norm(const BlockVector& x, const Metric& m) { return m.norm(x.data); }

double m_variance(std::span<const BlockVector> samples, const Metric& m) {
  if (samples.empty()) throw std::invalid_argument("m_variance: empty sample list");
  const BlockLayout& layout = samples.front().layout;
  const std::size_t n = samples.size();
  std::vector<double> mean(static_cast<std::size_t>(layout.total_dim()), 0.0);
  double mean_sq = 0.0;
  for (const BlockVector& s : samples) {
    if (s.layout != layout) throw std::invalid_argument("m_variance: mixed layouts");
    mean_sq += m.norm_squared(s.data);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += s.data[i];
  }
  mean_sq /= static_cast<double>(n);
  for (double& v : mean) v /= static_cast<double>(n);
  double var = mean_sq - m.norm_squared(mean);
  if (var < 0.0) {
    // the estimator is nonnegative; anything below is roundoff
    if (var < -1e-12 * std::max(1.0, mean_sq))
      throw std::runtime_error("m_variance: negative value beyond roundoff tolerance");
    var = 0.0;
  }
  return var;
}

BlockVector block_mask(const BlockVector& u, const SelectionVector& sel) {
  if (sel.size() != u.layout.blocks())
    throw std::invalid_argument("block_mask: selection length does not match block count");
  for (double v : sel.entries)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("block_mask: selection entry outside [0,1]");
  BlockVector out(u.layout);
  for (int b = 0; b < u.layout.blocks(); ++b) {
    const double s = sel.entries[b];
    auto src = u.block(b);
    auto dst = out.block(b);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
  }
  return out;
}

}  // namespace rcfpi
