#pragma once

#include <span>
#include <vector>

#include "rcfpi/linalg.hpp"

namespace rcfpi {

/// Block decomposition of R^n into m coordinate blocks.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<int> block_dims);

  /// n scalar blocks, the common case for the 2-D catalog operators.
  static BlockLayout scalar(int n);

  int blocks() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_[i]; }
  int offset(int i) const { return offsets_[i]; }
  int total_dim() const { return total_; }
  const std::vector<int>& block_dims() const { return dims_; }

  bool operator==(const BlockLayout& other) const { return dims_ == other.dims_; }
  bool operator!=(const BlockLayout& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

/// Element of H = H_1 + ... + H_m, stored flat in block order.
struct BlockVector {
  BlockLayout layout;
  std::vector<double> data;

  BlockVector() = default;
  explicit BlockVector(BlockLayout l);
  BlockVector(BlockLayout l, std::vector<double> values);

  /// Vector of scalar blocks, one per entry.
  static BlockVector scalar_blocks(std::vector<double> values);

  int dim() const { return static_cast<int>(data.size()); }
  std::span<double> block(int i) {
    return std::span<double>(data).subspan(layout.offset(i), layout.dim(i));
  }
  std::span<const double> block(int i) const {
    return std::span<const double>(data).subspan(layout.offset(i), layout.dim(i));
  }
};

BlockVector operator+(const BlockVector& a, const BlockVector& b);
BlockVector operator-(const BlockVector& a, const BlockVector& b);
BlockVector operator*(double s, const BlockVector& a);

/// Entrywise [0,1] mask over blocks; entry i scales block i.
struct SelectionVector {
  std::vector<double> entries;

  SelectionVector() = default;
  explicit SelectionVector(std::vector<double> e);
  static SelectionVector all_ones(int m);
  static SelectionVector unit(int m, int i);
  int size() const { return static_cast<int>(entries.size()); }
};

/// The inner-product operator M: identity, positive diagonal, or dense
/// symmetric positive definite. Dense metrics are validated eagerly by a full
/// eigendecomposition so ill-posed inputs fail before any long run.
class Metric {
 public:
  enum class Kind { identity, diagonal, dense };

  Metric() = default;  // identity with deferred dimension
  static Metric identity(int dim);
  static Metric diagonal(std::vector<double> weights);
  static Metric dense(Matrix m);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Identity metrics of unspecified dimension bind to any vector length.
  bool matches_dim(int n) const { return dim_ == 0 ? kind_ == Kind::identity : dim_ == n; }

  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;
  double norm_squared(std::span<const double> x) const { return inner(x, x); }
  /// out = M x
  void apply(std::span<const double> x, std::span<double> out) const;

  const std::vector<double>& weights() const { return weights_; }
  const Matrix& dense_matrix() const { return dense_; }

 private:
  Kind kind_ = Kind::identity;
  int dim_ = 0;
  std::vector<double> weights_;
  Matrix dense_;
};

double m_inner(const BlockVector& x, const BlockVector& y, const Metric& m);
double m_norm(const BlockVector& x, const Metric& m);

/// Var_M[X] = mean ||X||_M^2 - ||mean X||_M^2, clamped at zero when roundoff
/// produces a tiny negative value.
double m_variance(std::span<const BlockVector> samples, const Metric& m);

/// u restricted to the selected blocks: block i of the result is sel_i * u_i.
BlockVector block_mask(const BlockVector& u, const SelectionVector& sel);

}  // namespace rcfpi
