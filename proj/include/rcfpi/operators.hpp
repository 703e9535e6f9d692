#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rcfpi/blockspace.hpp"

namespace rcfpi {

/// Catalog of nonempty closed convex sets with exact Euclidean projections.
class ConvexSet {
 public:
  enum class Kind { box_corner, halfspace, neighborhood, hyperbola_region, product };

  /// {x : x_i <= upper_i}; +infinity leaves a coordinate unconstrained.
  static ConvexSet box_corner(std::vector<double> upper);
  /// {x : normal . x >= offset}
  static ConvexSet halfspace(std::vector<double> normal, double offset);
  /// {p : dist(p, scale * base) <= radius}, Euclidean distance.
  static ConvexSet neighborhood(ConvexSet base, double scale, double radius);
  /// {(x, y) : x > 0, x*y <= -1}, a closed convex region below one hyperbola
  /// branch.
  static ConvexSet hyperbola_region();
  static ConvexSet product(std::vector<ConvexSet> parts);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  void project_into(std::span<const double> p, std::span<double> out) const;
  std::vector<double> project(std::span<const double> p) const;
  std::vector<double> project(std::initializer_list<double> p) const {
    return project(std::span<const double>(p.begin(), p.size()));
  }
  bool contains(std::span<const double> p, double tol = 1e-9) const;

  const std::vector<double>& upper() const { return coeffs_; }
  const std::vector<double>& normal() const { return coeffs_; }
  double offset() const { return scalar_a_; }
  double scale() const { return scalar_a_; }
  double radius() const { return scalar_b_; }
  const ConvexSet& base() const { return children_.front(); }
  const std::vector<ConvexSet>& parts() const { return children_; }

 private:
  ConvexSet() = default;

  Kind kind_ = Kind::box_corner;
  int dim_ = 0;
  std::vector<double> coeffs_;
  double scalar_a_ = 0.0;
  double scalar_b_ = 0.0;
  std::vector<ConvexSet> children_;
};

std::vector<double> project(const ConvexSet& set, std::span<const double> p);
BlockVector project(const ConvexSet& set, const BlockVector& p);

/// Difference c_a - c_b of the alternating-projection pair after `iters`
/// rounds; converges to the minimum-norm element of closure(A - B) even when
/// the closest pair is not attained.
std::vector<double> gap_vector(const ConvexSet& a, const ConvexSet& b, std::int64_t iters);

/// A theta-averaged operator T together with its displacement S = (I - T)/theta.
/// The evaluation rule is any deterministic map; averagedness of user-supplied
/// rules is trusted, the built-in catalog is covered by property tests.
class AveragedOperator {
 public:
  using MapFn = std::function<void(std::span<const double>, std::span<double>)>;

  AveragedOperator(BlockLayout layout, double theta, MapFn map);

  /// T x = x - shift. A translation is theta-averaged for every theta in
  /// (0,1], with displacement shift/theta.
  static AveragedOperator translation(BlockLayout layout, std::vector<double> shift,
                                      double theta = 1.0);

  /// 1/2-averaged map on R^2 whose displacement couples the coordinates
  /// through their difference: S(x,y) = (1 + x - y, 1 + y - x).
  static AveragedOperator coupled_shift_2d();

  /// T = I - theta * Proj_set, with displacement Proj_set.
  static AveragedOperator scaled_projection(ConvexSet set, double theta);
  static AveragedOperator scaled_projection(ConvexSet set, double theta, BlockLayout layout);

  double theta() const { return theta_; }
  const BlockLayout& layout() const { return layout_; }

  void eval_into(std::span<const double> x, std::span<double> tx) const;
  /// sx = (x - Tx)/theta, computed in place over one buffer.
  void displacement_into(std::span<const double> x, std::span<double> sx) const;

  BlockVector apply(const BlockVector& x) const;
  BlockVector displacement(const BlockVector& x) const;
  /// x - theta * block_mask(Sx, sel)
  BlockVector coordinate_update(const SelectionVector& sel, const BlockVector& x) const;

 private:
  BlockLayout layout_;
  double theta_ = 1.0;
  MapFn map_;
};

/// theta * Proj_set(0): the infimal displacement vector of I - theta*Proj_set,
/// whose displacement range is exactly the set.
BlockVector infimal_displacement_of_scaled_projection(const ConvexSet& set, double theta);
BlockVector infimal_displacement_of_scaled_projection(const ConvexSet& set, double theta,
                                                      const BlockLayout& layout);

/// The averaged surrogate of the masked update: I - alpha*theta*S, an
/// (alpha*theta)-averaged operator sharing T's fixed points.
AveragedOperator averaged_surrogate(const AveragedOperator& t, double alpha);

}  // namespace rcfpi
