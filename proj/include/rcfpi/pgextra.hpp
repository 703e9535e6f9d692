#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rcfpi/engine.hpp"
#include "rcfpi/friedrichs.hpp"
#include "rcfpi/linalg.hpp"

namespace rcfpi {

/// Undirected, connected agent network without self-loops.
struct NetworkGraph {
  int m = 0;
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

  static NetworkGraph from_edges(int m, const std::vector<std::pair<int, int>>& edges);
  /// Agent 0 attached to agent 1; agents 1..m-1 fully connected.
  static NetworkGraph star_plus_clique(int m);

  int degree(int i) const { return static_cast<int>(neighbors[static_cast<std::size_t>(i)].size()); }
  std::int64_t degree_sum() const;
};

/// Symmetric mixing matrix respecting the topology, rows summing to one.
struct MixingMatrix {
  NetworkGraph graph;
  Matrix w;
  double epsilon_w = 0.0;
};

/// Metropolis constant edge weights W_ij = 1/(max(|N_i|,|N_j|) + eps).
MixingMatrix metropolis_matrix(const NetworkGraph& graph, double epsilon_w);

/// U >= 0 with U^2 = (I - W)/2, the coupling block of the Condat-Vu metric.
Matrix mixing_sqrt_half(const MixingMatrix& mix);

/// Dense 2md x 2md metric [[I/tau, U],[U, tau I]] on stacked (x, u), each
/// m x m block Kronecker-lifted to dimension d. Positive definiteness is
/// checked at construction.
Metric build_condat_vu_metric(const MixingMatrix& mix, double tau, int d);

/// Local objectives are indicators of catalog sets, so every prox is an exact
/// projection and tau only rescales the metric.
struct DecentralizedProblem {
  int d = 0;
  std::vector<ConvexSet> local_sets;  // one per agent
  double tau = 1.0;

  static DecentralizedProblem checked(int d, std::vector<ConvexSet> local_sets, double tau);
};

/// Agent 0 constrained to {x <= -10}, all others to the region under the
/// hyperbola branch; the two families share no point, so the instance is
/// infeasible with a nonzero displacement vector.
DecentralizedProblem infeasible_two_set_instance(int m, double tau = 1.0);

/// Selection favoring the hub: coordinate 0 drawn with probability hub_prob
/// at a reduced step so the expected step stays uniform; every other
/// coordinate drawn uniformly with the remaining mass.
SelectionDistribution hub_weighted_single_coordinate(int m, double hub_prob);

/// Stacked (x_1..x_m, w_1..w_m) layout used for PG-EXTRA trajectories.
BlockLayout pgextra_layout(int m, int d);

struct PgExtraMessage {
  std::int64_t iteration = 0;
  int from = 0;
  int to = 0;
  int payload_doubles = 0;
};

struct PgExtraCrossing {
  double level = 0.0;
  bool reached = false;
  std::int64_t k = 0;
  std::int64_t comm = 0;
};

struct PgExtraOptions {
  std::vector<std::int64_t> checkpoints;  // empty means the default geometric grid
  /// Monitor target c*v; when set, ||(x,w)/k + target||^2 (Euclidean) is
  /// evaluated every iteration.
  std::optional<BlockVector> monitor_target;
  std::vector<double> crossing_levels;
  bool record_messages = false;  // full log, only for small runs
  bool warn_eigenvalue = true;
  double cache_tol = 1e-8;
};

struct PgExtraRun {
  Trajectory traj;
  std::vector<double> monitor_at_checkpoints;
  std::vector<PgExtraCrossing> crossings;
  std::vector<PgExtraMessage> messages;
};

PgExtraRun run_pg_extra(const DecentralizedProblem& problem, const MixingMatrix& mix,
                        std::int64_t k, const PgExtraOptions& opts = {});

PgExtraRun run_rc_pg_extra(const DecentralizedProblem& problem, const MixingMatrix& mix,
                           const SelectionDistribution& dist, std::int64_t k,
                           std::uint64_t seed, const PgExtraOptions& opts = {});

/// Analytic infimal displacement vector of PG-EXTRA for the two-set family:
/// zero x-part; w-part of agents 0 and 1 proportional to the minimum-norm
/// element u of closure(C_0 - C_1), computed by alternating projections.
BlockVector analytic_idv_two_set(const DecentralizedProblem& problem, const MixingMatrix& mix,
                                 std::int64_t gap_iters = 300000);

/// The Condat-Vu fixed-point operator on stacked (x, u), 1/2-averaged in the
/// metric above. Layout: m agent blocks of dimension d, then one u block.
AveragedOperator condat_vu_operator(const DecentralizedProblem& problem,
                                    const MixingMatrix& mix);

struct PgExtraSplit {
  NonOrthogonalSplit split;  // u block unconditional, agent x blocks masked
  SubspacePair pair;         // u subspace vs x subspace under the metric
};

PgExtraSplit pgextra_friedrichs_split(const MixingMatrix& mix, double tau, int d, double alpha);

/// Maps an engine (x, u) state to the (x, w) coordinates via w = tau U u.
BlockVector cv_state_to_xw(const BlockVector& ux, const MixingMatrix& mix, double tau, int d);

}  // namespace rcfpi
