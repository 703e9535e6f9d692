#include "rcfpi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rcfpi/csv.hpp"

namespace rcfpi {

const BlockVector& Trajectory::normalized_at(std::int64_t k) const {
  for (std::size_t i = 0; i < checkpoint_ks.size(); ++i)
    if (checkpoint_ks[i] == k) return normalized[i];
  throw std::out_of_range("Trajectory: no checkpoint recorded at k=" + std::to_string(k));
}

BlockVector normalized_iterate(const Trajectory& traj, std::int64_t k) {
  return traj.normalized_at(k);
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t k_max, int per_decade) {
  if (k_max < 1) throw std::invalid_argument("geometric_checkpoints: k_max must be >= 1");
  if (per_decade < 1) throw std::invalid_argument("geometric_checkpoints: bad per_decade");
  std::vector<std::int64_t> ks;
  const double ratio = std::pow(10.0, 1.0 / per_decade);
  double v = 1.0;
  while (v < static_cast<double>(k_max)) {
    const auto k = static_cast<std::int64_t>(std::llround(v));
    if (ks.empty() || k > ks.back()) ks.push_back(k);
    v *= ratio;
  }
  if (ks.empty() || ks.back() != k_max) ks.push_back(k_max);
  return ks;
}

namespace {

struct CheckpointWriter {
  const std::vector<std::int64_t>& ks;
  std::size_t next = 0;
  Trajectory& traj;
  const BlockLayout& layout;
  bool store_iterates;

  void maybe_record(std::int64_t k, const std::vector<double>& x, std::int64_t comm) {
    while (next < ks.size() && ks[next] == k) {
      BlockVector norm(layout, x);
      const double inv = 1.0 / static_cast<double>(k);
      for (double& v : norm.data) v *= inv;
      traj.checkpoint_ks.push_back(k);
      traj.normalized.push_back(std::move(norm));
      traj.comm_counts.push_back(comm);
      if (store_iterates) traj.iterates.emplace_back(layout, x);
      ++next;
    }
  }
};

std::vector<std::int64_t> resolve_checkpoints(const RunOptions& opts, std::int64_t k) {
  std::vector<std::int64_t> ks = opts.checkpoints;
  if (ks.empty()) ks = geometric_checkpoints(k);
  if (std::adjacent_find(ks.begin(), ks.end(),
                         [](std::int64_t a, std::int64_t b) { return a >= b; }) != ks.end())
    throw std::invalid_argument("RunOptions: checkpoints must be strictly increasing");
  if (ks.front() < 1 || ks.back() > k)
    throw std::invalid_argument("RunOptions: checkpoints outside [1, k]");
  return ks;
}

void check_finite(const std::vector<double>& x, std::int64_t k) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::runtime_error("non-finite iterate at iteration " + std::to_string(k));
}

void require_layout(const AveragedOperator& t, const BlockVector& x0) {
  if (x0.layout != t.layout())
    throw std::invalid_argument("run: starting point layout does not match operator");
}

}  // namespace

Trajectory run_fpi(const AveragedOperator& t, const BlockVector& x0, std::int64_t k,
                   const RunOptions& opts) {
  require_layout(t, x0);
  if (k < 1) throw std::invalid_argument("run_fpi: k must be >= 1");
  const auto ks = resolve_checkpoints(opts, k);

  Trajectory traj;
  CheckpointWriter writer{ks, 0, traj, t.layout(), opts.store_iterates};
  std::vector<double> x = x0.data;
  std::vector<double> s(x.size());

  double prev_norm = 0.0;
  bool have_prev = false;
  for (std::int64_t j = 0; j < k; ++j) {
    t.displacement_into(x, s);
    if (opts.check_monotone_displacement) {
      const double norm = opts.metric.norm(s);
      if (have_prev && norm > prev_norm + opts.monotone_tol * (1.0 + prev_norm))
        throw std::runtime_error("displacement norm increased along deterministic run at k=" +
                                 std::to_string(j) + "; operator is not averaged as declared");
      prev_norm = norm;
      have_prev = true;
    }
    const double theta = t.theta();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= theta * s[i];
    if ((j + 1) % opts.nonfinite_stride == 0) check_finite(x, j + 1);
    writer.maybe_record(j + 1, x, 0);
  }
  check_finite(x, k);
  traj.final_iterate = BlockVector(t.layout(), std::move(x));
  traj.k_final = k;
  return traj;
}

Trajectory run_rcfpi(const AveragedOperator& t, const SelectionDistribution& dist,
                     const BlockVector& x0, std::int64_t k, std::uint64_t seed,
                     const RunOptions& opts) {
  require_layout(t, x0);
  if (dist.block_count() != t.layout().blocks())
    throw std::invalid_argument("run_rcfpi: distribution block count does not match layout");
  if (k < 1) throw std::invalid_argument("run_rcfpi: k must be >= 1");
  const auto ks = resolve_checkpoints(opts, k);
  const BlockLayout& layout = t.layout();

  Trajectory traj;
  traj.seed = seed;
  CheckpointWriter writer{ks, 0, traj, layout, opts.store_iterates};
  RngStream rng(seed, 0);
  std::vector<double> x = x0.data;
  std::vector<double> s(x.size());
  const double theta = t.theta();

  for (std::int64_t j = 0; j < k; ++j) {
    t.displacement_into(x, s);
    const SelectionVector& sel = dist.sample(rng);
    for (int b = 0; b < layout.blocks(); ++b) {
      const double si = sel.entries[b];
      if (si == 0.0) continue;
      const double step = theta * si;
      const int off = layout.offset(b);
      for (int i = off; i < off + layout.dim(b); ++i) x[i] -= step * s[i];
    }
    if ((j + 1) % opts.nonfinite_stride == 0) check_finite(x, j + 1);
    writer.maybe_record(j + 1, x, 0);
  }
  check_finite(x, k);
  traj.final_iterate = BlockVector(layout, std::move(x));
  traj.k_final = k;
  return traj;
}

NonOrthogonalSplit NonOrthogonalSplit::checked(BlockLayout layout, int g_block,
                                               double alpha_for_g, const Metric& m) {
  if (layout.blocks() < 2)
    throw std::invalid_argument("NonOrthogonalSplit: need at least one masked block");
  if (g_block < 0 || g_block >= layout.blocks())
    throw std::invalid_argument("NonOrthogonalSplit: invalid g block");
  if (!(alpha_for_g > 0.0 && alpha_for_g <= 1.0))
    throw std::invalid_argument("NonOrthogonalSplit: alpha must be in (0,1]");
  if (!m.matches_dim(layout.total_dim()))
    throw std::invalid_argument("NonOrthogonalSplit: metric dimension mismatch");

  // pairwise M-orthogonality of the masked blocks
  const int n = layout.total_dim();
  std::vector<double> ei(static_cast<std::size_t>(n)), mei(static_cast<std::size_t>(n));
  for (int b1 = 0; b1 < layout.blocks(); ++b1) {
    if (b1 == g_block) continue;
    for (int i = layout.offset(b1); i < layout.offset(b1) + layout.dim(b1); ++i) {
      std::fill(ei.begin(), ei.end(), 0.0);
      ei[static_cast<std::size_t>(i)] = 1.0;
      m.apply(ei, mei);
      for (int b2 = 0; b2 < layout.blocks(); ++b2) {
        if (b2 == g_block || b2 == b1) continue;
        for (int j = layout.offset(b2); j < layout.offset(b2) + layout.dim(b2); ++j)
          if (std::fabs(mei[static_cast<std::size_t>(j)]) > 1e-10)
            throw std::invalid_argument(
                "NonOrthogonalSplit: masked blocks are not M-orthogonal");
      }
    }
  }
  NonOrthogonalSplit split;
  split.layout = std::move(layout);
  split.g_block = g_block;
  split.alpha_for_g = alpha_for_g;
  return split;
}

Trajectory run_rcfpi_nonorthogonal(const AveragedOperator& t, const NonOrthogonalSplit& split,
                                   const SelectionDistribution& dist, const BlockVector& x0,
                                   std::int64_t k, std::uint64_t seed, const RunOptions& opts) {
  require_layout(t, x0);
  if (split.layout != t.layout())
    throw std::invalid_argument("run_rcfpi_nonorthogonal: split layout mismatch");
  if (dist.block_count() != split.masked_blocks())
    throw std::invalid_argument(
        "run_rcfpi_nonorthogonal: distribution must cover the masked blocks");
  if (k < 1) throw std::invalid_argument("run_rcfpi_nonorthogonal: k must be >= 1");
  const auto ks = resolve_checkpoints(opts, k);
  const BlockLayout& layout = t.layout();

  Trajectory traj;
  traj.seed = seed;
  CheckpointWriter writer{ks, 0, traj, layout, opts.store_iterates};
  RngStream rng(seed, 0);
  std::vector<double> x = x0.data;
  std::vector<double> s(x.size());
  const double theta = t.theta();

  for (std::int64_t j = 0; j < k; ++j) {
    t.displacement_into(x, s);
    const SelectionVector& sel = dist.sample(rng);
    for (int b = 0; b < layout.blocks(); ++b) {
      const double si =
          (b == split.g_block)
              ? split.alpha_for_g
              : sel.entries[(b < split.g_block) ? b : b - 1];
      if (si == 0.0) continue;
      const double step = theta * si;
      const int off = layout.offset(b);
      for (int i = off; i < off + layout.dim(b); ++i) x[i] -= step * s[i];
    }
    if ((j + 1) % opts.nonfinite_stride == 0) check_finite(x, j + 1);
    writer.maybe_record(j + 1, x, 0);
  }
  check_finite(x, k);
  traj.final_iterate = BlockVector(layout, std::move(x));
  traj.k_final = k;
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const TrajectoryCsvOptions& opts) {
  CsvWriter csv(os);
  const int dim = traj.normalized.empty() ? 0 : traj.normalized.front().dim();
  csv.field("k");
  for (int i = 0; i < dim; ++i) csv.field("x" + std::to_string(i));
  if (opts.v_ref) csv.field("monitor");
  csv.end_row();
  for (std::size_t c = 0; c < traj.checkpoint_ks.size(); ++c) {
    csv.field(traj.checkpoint_ks[c]);
    const BlockVector& nz = traj.normalized[c];
    for (double v : nz.data) csv.field(v);
    if (opts.v_ref) {
      BlockVector diff = nz;
      for (std::size_t i = 0; i < diff.data.size(); ++i)
        diff.data[i] += opts.v_scale * opts.v_ref->data[i];
      csv.field(opts.metric.norm_squared(diff.data));
    }
    csv.end_row();
  }
}

}  // namespace rcfpi
