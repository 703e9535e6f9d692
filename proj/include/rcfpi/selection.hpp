#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcfpi/blockspace.hpp"
#include "rcfpi/rng.hpp"

namespace rcfpi {

/// Finite-support distribution over selection vectors in [0,1]^m satisfying
/// the uniform expected step-size condition E[I] = alpha * 1. The condition is
/// validated exactly at construction by enumerating the support.
class SelectionDistribution {
 public:
  static SelectionDistribution uniform_single_coordinate(int m);
  static SelectionDistribution finite_support(
      std::vector<std::pair<SelectionVector, double>> atoms);
  static SelectionDistribution deterministic(SelectionVector v);

  int block_count() const { return m_; }
  double alpha() const { return alpha_; }
  std::optional<double> beta_hint() const { return beta_hint_; }
  void set_beta_hint(double beta) { beta_hint_ = beta; }

  std::size_t support_size() const { return support_.size(); }
  const SelectionVector& atom(std::size_t i) const { return support_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }

  /// Inverse-CDF draw; a fixed stream yields a fixed sequence of atoms.
  const SelectionVector& sample(RngStream& rng) const;

 private:
  SelectionDistribution(std::vector<SelectionVector> support, std::vector<double> probs);

  int m_ = 0;
  double alpha_ = 0.0;
  std::optional<double> beta_hint_;
  std::vector<SelectionVector> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// Exact enumeration of E[I]; returns alpha when every coordinate agrees
/// within 1e-12, otherwise throws naming the offending coordinates.
double validate_uniform_step(const SelectionDistribution& dist);

/// beta = alpha, valid only for the orthonormal (identity-metric) block basis.
double beta_orthonormal(const SelectionDistribution& dist,
                        const Metric& context = Metric());

/// Tightest beta with E||u_I||_M^2 <= beta ||u||_M^2: the largest generalized
/// Rayleigh quotient of the enumerated expectation form against M.
double beta_exact_enumeration(const SelectionDistribution& dist, const Metric& m,
                              const BlockLayout& layout);

/// Same, for the split update alpha*g + sum I_i h_i where block `g_block` of
/// the layout is scaled by alpha unconditionally and the remaining blocks are
/// masked by I.
double beta_exact_enumeration_with_g_block(const SelectionDistribution& dist, const Metric& m,
                                           const BlockLayout& layout, int g_block,
                                           double alpha_for_g);

/// beta = alpha^2 + (alpha - alpha^2)/(1 - c_F^2) for Friedrichs cosine c_F.
double beta_from_friedrichs(double alpha, double c_f);

}  // namespace rcfpi
