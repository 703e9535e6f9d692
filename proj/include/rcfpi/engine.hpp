#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rcfpi/operators.hpp"
#include "rcfpi/selection.hpp"

namespace rcfpi {

/// Recorded run of a fixed-point iteration. Normalized iterates x^k/k are
/// stored at the requested checkpoints; full iterates only behind a flag
/// since long runs make dense storage wasteful.
struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<std::int64_t> checkpoint_ks;
  std::vector<BlockVector> normalized;
  std::vector<std::int64_t> comm_counts;  // zero unless produced by PG-EXTRA
  std::vector<BlockVector> iterates;      // filled only when requested
  BlockVector final_iterate;
  std::int64_t k_final = 0;
  std::int64_t comm_total = 0;

  const BlockVector& normalized_at(std::int64_t k) const;
};

/// x^k / k at a recorded checkpoint.
BlockVector normalized_iterate(const Trajectory& traj, std::int64_t k);

struct RunOptions {
  /// Ascending checkpoint iterations; empty means the default geometric grid.
  std::vector<std::int64_t> checkpoints;
  bool store_iterates = false;
  /// Metric for the displacement-monotonicity check along deterministic runs.
  Metric metric;
  bool check_monotone_displacement = true;
  double monotone_tol = 1e-10;
  /// Non-finite iterates abort the run; checked at this stride.
  int nonfinite_stride = 1024;
};

/// Geometric checkpoint grid: roughly `per_decade` values per decade of k,
/// always including 1 and k_max.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t k_max, int per_decade = 8);

Trajectory run_fpi(const AveragedOperator& t, const BlockVector& x0, std::int64_t k,
                   const RunOptions& opts = {});

Trajectory run_rcfpi(const AveragedOperator& t, const SelectionDistribution& dist,
                     const BlockVector& x0, std::int64_t k, std::uint64_t seed,
                     const RunOptions& opts = {});

/// Split of the space into one block updated unconditionally at scale alpha
/// (the part spanned by a basis that is oblique to the rest) and m masked
/// blocks that must be pairwise M-orthogonal.
struct NonOrthogonalSplit {
  BlockLayout layout;  // block `g_block` is the unconditional one
  int g_block = 0;
  double alpha_for_g = 0.0;

  int masked_blocks() const { return layout.blocks() - 1; }
  /// Validates the pairwise M-orthogonality of the masked blocks to 1e-10.
  static NonOrthogonalSplit checked(BlockLayout layout, int g_block, double alpha_for_g,
                                    const Metric& m);
};

Trajectory run_rcfpi_nonorthogonal(const AveragedOperator& t, const NonOrthogonalSplit& split,
                                   const SelectionDistribution& dist, const BlockVector& x0,
                                   std::int64_t k, std::uint64_t seed,
                                   const RunOptions& opts = {});

/// CSV rows k, normalized-iterate components, and optionally
/// ||x^k/k + alpha*v||_M^2 against a reference displacement vector.
struct TrajectoryCsvOptions {
  std::optional<BlockVector> v_ref;
  double v_scale = 1.0;  // alpha for randomized runs, 1 for deterministic
  Metric metric;
};
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const TrajectoryCsvOptions& opts = {});

}  // namespace rcfpi
