#include "rcfpi/pgextra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rcfpi {

namespace {

bool sets_equal(const ConvexSet& a, const ConvexSet& b) {
  if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
  switch (a.kind()) {
    case ConvexSet::Kind::box_corner:
      return a.upper() == b.upper();
    case ConvexSet::Kind::halfspace:
      return a.normal() == b.normal() && a.offset() == b.offset();
    case ConvexSet::Kind::neighborhood:
      return a.scale() == b.scale() && a.radius() == b.radius() &&
             sets_equal(a.base(), b.base());
    case ConvexSet::Kind::hyperbola_region:
      return true;
    case ConvexSet::Kind::product: {
      if (a.parts().size() != b.parts().size()) return false;
      for (std::size_t i = 0; i < a.parts().size(); ++i)
        if (!sets_equal(a.parts()[i], b.parts()[i])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

NetworkGraph NetworkGraph::from_edges(int m, const std::vector<std::pair<int, int>>& edges) {
  if (m < 1) throw std::invalid_argument("NetworkGraph: need at least one agent");
  NetworkGraph g;
  g.m = m;
  g.neighbors.assign(static_cast<std::size_t>(m), {});
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= m || b >= m)
      throw std::invalid_argument("NetworkGraph: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("NetworkGraph: self-loop");
    g.neighbors[static_cast<std::size_t>(a)].push_back(b);
    g.neighbors[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : g.neighbors) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      throw std::invalid_argument("NetworkGraph: duplicate edge");
  }
  // connectivity by traversal
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int nb : g.neighbors[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(nb)]) {
        seen[static_cast<std::size_t>(nb)] = 1;
        ++count;
        stack.push_back(nb);
      }
    }
  }
  if (count != m && m > 1) throw std::invalid_argument("NetworkGraph: graph is not connected");
  return g;
}

NetworkGraph NetworkGraph::star_plus_clique(int m) {
  if (m < 2) throw std::invalid_argument("star_plus_clique: need at least two agents");
  std::vector<std::pair<int, int>> edges;
  edges.emplace_back(0, 1);
  for (int i = 1; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edges.emplace_back(i, j);
  return from_edges(m, edges);
}

std::int64_t NetworkGraph::degree_sum() const {
  std::int64_t s = 0;
  for (const auto& list : neighbors) s += static_cast<std::int64_t>(list.size());
  return s;
}

MixingMatrix metropolis_matrix(const NetworkGraph& graph, double epsilon_w) {
  if (!(epsilon_w > 0.0)) throw std::invalid_argument("metropolis_matrix: epsilon must be > 0");
  MixingMatrix mix;
  mix.graph = graph;
  mix.epsilon_w = epsilon_w;
  mix.w = Matrix(graph.m, graph.m);
  for (int i = 0; i < graph.m; ++i) {
    double off_sum = 0.0;
    for (int j : graph.neighbors[static_cast<std::size_t>(i)]) {
      const double wij = 1.0 / (static_cast<double>(std::max(graph.degree(i), graph.degree(j))) +
                                epsilon_w);
      mix.w(i, j) = wij;
      off_sum += wij;
    }
    mix.w(i, i) = 1.0 - off_sum;
  }
  return mix;
}

Matrix mixing_sqrt_half(const MixingMatrix& mix) {
  const int m = mix.w.rows();
  Matrix half(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) half(i, j) = 0.5 * ((i == j ? 1.0 : 0.0) - mix.w(i, j));
  const SymmetricEigen eig = jacobi_eigen(half);
  if (eig.values.front() < -1e-10)
    throw std::invalid_argument("mixing_sqrt_half: (I - W)/2 is not positive semidefinite");
  return sym_power(eig, 0.5, 1e-12);
}

Metric build_condat_vu_metric(const MixingMatrix& mix, double tau, int d) {
  if (!(tau > 0.0)) throw std::invalid_argument("build_condat_vu_metric: tau must be positive");
  if (d < 1) throw std::invalid_argument("build_condat_vu_metric: d must be >= 1");
  const int m = mix.w.rows();
  const Matrix u = mixing_sqrt_half(mix);
  const int n = 2 * m * d;
  Matrix mat(n, n);
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < d; ++a) {
      const int xi = i * d + a;
      mat(xi, xi) = 1.0 / tau;
      mat(m * d + xi, m * d + xi) = tau;
      for (int j = 0; j < m; ++j) {
        const int uj = m * d + j * d + a;
        mat(xi, uj) = u(i, j);
        mat(uj, xi) = u(i, j);
      }
    }
  }
  return Metric::dense(std::move(mat));  // positive definiteness checked here
}

DecentralizedProblem DecentralizedProblem::checked(int d, std::vector<ConvexSet> local_sets,
                                                   double tau) {
  if (d < 1) throw std::invalid_argument("DecentralizedProblem: d must be >= 1");
  if (local_sets.empty()) throw std::invalid_argument("DecentralizedProblem: no agents");
  if (!(tau > 0.0)) throw std::invalid_argument("DecentralizedProblem: tau must be positive");
  for (const ConvexSet& s : local_sets)
    if (s.dim() != d)
      throw std::invalid_argument("DecentralizedProblem: set dimension does not match d");
  DecentralizedProblem p;
  p.d = d;
  p.local_sets = std::move(local_sets);
  p.tau = tau;
  return p;
}

DecentralizedProblem infeasible_two_set_instance(int m, double tau) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<ConvexSet> sets;
  sets.reserve(static_cast<std::size_t>(m));
  sets.push_back(ConvexSet::box_corner({-10.0, inf}));
  for (int i = 1; i < m; ++i) sets.push_back(ConvexSet::hyperbola_region());
  return DecentralizedProblem::checked(2, std::move(sets), tau);
}

SelectionDistribution hub_weighted_single_coordinate(int m, double hub_prob) {
  if (m < 2) throw std::invalid_argument("hub_weighted_single_coordinate: need m >= 2");
  if (!(hub_prob > 0.0 && hub_prob < 1.0))
    throw std::invalid_argument("hub_weighted_single_coordinate: hub_prob must be in (0,1)");
  const double hub_entry = (1.0 - hub_prob) / (hub_prob * static_cast<double>(m - 1));
  if (hub_entry > 1.0)
    throw std::invalid_argument(
        "hub_weighted_single_coordinate: hub step exceeds 1; raise hub_prob");
  std::vector<std::pair<SelectionVector, double>> atoms;
  std::vector<double> hub(static_cast<std::size_t>(m), 0.0);
  hub[0] = hub_entry;
  atoms.emplace_back(SelectionVector(std::move(hub)), hub_prob);
  for (int i = 1; i < m; ++i)
    atoms.emplace_back(SelectionVector::unit(m, i), (1.0 - hub_prob) / (m - 1));
  return SelectionDistribution::finite_support(std::move(atoms));
}

BlockLayout pgextra_layout(int m, int d) {
  return BlockLayout(std::vector<int>(static_cast<std::size_t>(2 * m), d));
}

namespace {

struct MonitorState {
  const PgExtraOptions& opts;
  std::vector<PgExtraCrossing> crossings;

  explicit MonitorState(const PgExtraOptions& o) : opts(o) {
    for (double level : o.crossing_levels) crossings.push_back({level, false, 0, 0});
  }

  bool active() const { return opts.monitor_target.has_value(); }

  double value(const std::vector<double>& x, const std::vector<double>& w, std::int64_t k) {
    const auto& target = opts.monitor_target->data;
    const double inv = 1.0 / static_cast<double>(k);
    double s = 0.0;
    const std::size_t half = x.size();
    for (std::size_t i = 0; i < half; ++i) {
      const double di = x[i] * inv + target[i];
      s += di * di;
    }
    for (std::size_t i = 0; i < half; ++i) {
      const double di = w[i] * inv + target[half + i];
      s += di * di;
    }
    return s;
  }

  void observe(double m, std::int64_t k, std::int64_t comm) {
    for (auto& c : crossings) {
      if (!c.reached && m <= c.level) {
        c.reached = true;
        c.k = k;
        c.comm = comm;
      }
    }
  }
};

std::vector<std::int64_t> resolve_checkpoints(const std::vector<std::int64_t>& requested,
                                              std::int64_t k) {
  std::vector<std::int64_t> ks = requested;
  if (ks.empty()) ks = geometric_checkpoints(k);
  if (std::adjacent_find(ks.begin(), ks.end(),
                         [](std::int64_t a, std::int64_t b) { return a >= b; }) != ks.end())
    throw std::invalid_argument("PgExtraOptions: checkpoints must be strictly increasing");
  if (ks.front() < 1 || ks.back() > k)
    throw std::invalid_argument("PgExtraOptions: checkpoints outside [1, k]");
  return ks;
}

void record_checkpoint(Trajectory& traj, std::vector<double>& monitor_out,
                       const MonitorState& mon, const BlockLayout& layout,
                       const std::vector<double>& x, const std::vector<double>& w,
                       std::int64_t k, std::int64_t comm, double monitor_value) {
  BlockVector nz(layout);
  const double inv = 1.0 / static_cast<double>(k);
  const std::size_t half = x.size();
  for (std::size_t i = 0; i < half; ++i) nz.data[i] = x[i] * inv;
  for (std::size_t i = 0; i < half; ++i) nz.data[half + i] = w[i] * inv;
  traj.checkpoint_ks.push_back(k);
  traj.normalized.push_back(std::move(nz));
  traj.comm_counts.push_back(comm);
  monitor_out.push_back(mon.active() ? monitor_value : 0.0);
}

void verify_wx_cache(const MixingMatrix& mix, const std::vector<double>& x,
                     const std::vector<double>& wx, int d, double tol) {
  const int m = mix.w.rows();
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < d; ++a) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += mix.w(i, j) * x[static_cast<std::size_t>(j * d + a)];
      if (std::fabs(acc - wx[static_cast<std::size_t>(i * d + a)]) > tol)
        throw std::runtime_error("RC-PG-EXTRA: neighbor-sum cache drifted beyond tolerance");
    }
  }
}

void check_problem(const DecentralizedProblem& problem, const MixingMatrix& mix) {
  if (static_cast<int>(problem.local_sets.size()) != mix.graph.m)
    throw std::invalid_argument("PG-EXTRA: agent count mismatch between problem and network");
}

}  // namespace

PgExtraRun run_pg_extra(const DecentralizedProblem& problem, const MixingMatrix& mix,
                        std::int64_t k, const PgExtraOptions& opts) {
  check_problem(problem, mix);
  if (k < 1) throw std::invalid_argument("run_pg_extra: k must be >= 1");
  const int m = mix.graph.m;
  const int d = problem.d;
  const auto ks = resolve_checkpoints(opts.checkpoints, k);
  const BlockLayout layout = pgextra_layout(m, d);

  PgExtraRun run;
  run.traj.k_final = k;
  MonitorState mon(opts);

  std::vector<double> x(static_cast<std::size_t>(m * d), 0.0), w = x, wx = x;
  std::vector<double> prox(x.size()), delta(x.size());
  std::int64_t comm = 0;
  std::size_t next_ck = 0;

  std::vector<double> arg(static_cast<std::size_t>(d));
  for (std::int64_t j = 0; j < k; ++j) {
    // x and w advance simultaneously from the pre-iteration state
    for (int i = 0; i < m; ++i) {
      const std::size_t off = static_cast<std::size_t>(i * d);
      for (int a = 0; a < d; ++a) arg[static_cast<std::size_t>(a)] = wx[off + a] - w[off + a];
      problem.local_sets[static_cast<std::size_t>(i)].project_into(
          arg, std::span<double>(prox).subspan(off, static_cast<std::size_t>(d)));
    }
    for (std::size_t i = 0; i < x.size(); ++i) delta[i] = prox[i] - x[i];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += 0.5 * (x[i] - wx[i]);
    x.swap(prox);
    // every agent sends its update; neighbor sums advance incrementally in
    // (sender, receiver) order, exactly like the masked run with full
    // selection
    for (int i = 0; i < m; ++i) {
      const std::size_t ioff = static_cast<std::size_t>(i * d);
      for (int a = 0; a < d; ++a) wx[ioff + a] += mix.w(i, i) * delta[ioff + a];
      for (int nb : mix.graph.neighbors[static_cast<std::size_t>(i)]) {
        const std::size_t noff = static_cast<std::size_t>(nb * d);
        for (int a = 0; a < d; ++a) wx[noff + a] += mix.w(nb, i) * delta[ioff + a];
        ++comm;
        if (opts.record_messages) run.messages.push_back({j, i, nb, d});
      }
    }

    double mval = 0.0;
    if (mon.active()) {
      mval = mon.value(x, w, j + 1);
      mon.observe(mval, j + 1, comm);
    }
    while (next_ck < ks.size() && ks[next_ck] == j + 1) {
      record_checkpoint(run.traj, run.monitor_at_checkpoints, mon, layout, x, w, j + 1, comm,
                        mval);
      ++next_ck;
    }
  }

  verify_wx_cache(mix, x, wx, d, opts.cache_tol);
  run.traj.comm_total = comm;
  BlockVector fin(layout);
  std::copy(x.begin(), x.end(), fin.data.begin());
  std::copy(w.begin(), w.end(), fin.data.begin() + static_cast<std::ptrdiff_t>(x.size()));
  run.traj.final_iterate = std::move(fin);
  run.crossings = std::move(mon.crossings);
  return run;
}

PgExtraRun run_rc_pg_extra(const DecentralizedProblem& problem, const MixingMatrix& mix,
                           const SelectionDistribution& dist, std::int64_t k,
                           std::uint64_t seed, const PgExtraOptions& opts) {
  check_problem(problem, mix);
  const int m = mix.graph.m;
  const int d = problem.d;
  if (dist.block_count() != m)
    throw std::invalid_argument("run_rc_pg_extra: distribution must have one entry per agent");
  if (k < 1) throw std::invalid_argument("run_rc_pg_extra: k must be >= 1");
  const auto ks = resolve_checkpoints(opts.checkpoints, k);
  const BlockLayout layout = pgextra_layout(m, d);
  const double alpha = dist.alpha();

  if (opts.warn_eigenvalue) {
    const EigenvalueCondition cond = check_eigenvalue_condition(mix.w, alpha);
    if (!cond.pass)
      std::fprintf(stderr,
                   "run_rc_pg_extra: warning: lambda_min(W)=%.6f violates the sufficient "
                   "condition threshold %.6f (margin %.2e)\n",
                   cond.lambda_min, cond.threshold, cond.margin);
  }

  PgExtraRun run;
  run.traj.seed = seed;
  run.traj.k_final = k;
  MonitorState mon(opts);
  RngStream rng(seed, 0);

  std::vector<double> x(static_cast<std::size_t>(m * d), 0.0), w = x, wx = x;
  std::vector<double> dw(x.size());
  std::vector<double> prox(x.size());
  std::vector<double> delta(x.size());  // Delta x_i for selected agents
  std::vector<int> selected;
  selected.reserve(static_cast<std::size_t>(m));
  std::vector<double> arg(static_cast<std::size_t>(d));
  std::int64_t comm = 0;
  std::size_t next_ck = 0;

  for (std::int64_t j = 0; j < k; ++j) {
    const SelectionVector& sel = dist.sample(rng);

    // phase 1: read the pre-iteration state only
    for (std::size_t i = 0; i < w.size(); ++i) dw[i] = 0.5 * alpha * (x[i] - wx[i]);
    selected.clear();
    for (int i = 0; i < m; ++i) {
      if (sel.entries[i] == 0.0) continue;
      selected.push_back(i);
      const std::size_t off = static_cast<std::size_t>(i * d);
      for (int a = 0; a < d; ++a) arg[static_cast<std::size_t>(a)] = wx[off + a] - w[off + a];
      problem.local_sets[static_cast<std::size_t>(i)].project_into(
          arg, std::span<double>(prox).subspan(off, static_cast<std::size_t>(d)));
      for (int a = 0; a < d; ++a) delta[off + a] = prox[off + a] - x[off + a];
    }

    // phase 2: apply w updates, then x updates, then messages, in index order
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += dw[i];
    for (int i : selected) {
      const double si = sel.entries[i];
      const std::size_t off = static_cast<std::size_t>(i * d);
      if (si == 1.0) {
        // exact assignment keeps the unit-selection run identical to the
        // full update
        for (int a = 0; a < d; ++a) x[off + a] = prox[off + a];
      } else {
        for (int a = 0; a < d; ++a) x[off + a] += si * delta[off + a];
      }
    }
    for (int i : selected) {
      const double si = sel.entries[i];
      const std::size_t ioff = static_cast<std::size_t>(i * d);
      // self-term keeps the cache coherent but is not a message
      for (int a = 0; a < d; ++a) wx[ioff + a] += mix.w(i, i) * si * delta[ioff + a];
      for (int nb : mix.graph.neighbors[static_cast<std::size_t>(i)]) {
        const double wni = mix.w(nb, i) * si;
        const std::size_t noff = static_cast<std::size_t>(nb * d);
        for (int a = 0; a < d; ++a) wx[noff + a] += wni * delta[ioff + a];
        ++comm;
        if (opts.record_messages) run.messages.push_back({j, i, nb, d});
      }
    }

    double mval = 0.0;
    if (mon.active()) {
      mval = mon.value(x, w, j + 1);
      mon.observe(mval, j + 1, comm);
    }
    while (next_ck < ks.size() && ks[next_ck] == j + 1) {
      record_checkpoint(run.traj, run.monitor_at_checkpoints, mon, layout, x, w, j + 1, comm,
                        mval);
      ++next_ck;
    }
  }

  verify_wx_cache(mix, x, wx, d, opts.cache_tol);
  run.traj.comm_total = comm;
  BlockVector fin(layout);
  std::copy(x.begin(), x.end(), fin.data.begin());
  std::copy(w.begin(), w.end(), fin.data.begin() + static_cast<std::ptrdiff_t>(x.size()));
  run.traj.final_iterate = std::move(fin);
  run.crossings = std::move(mon.crossings);
  return run;
}

BlockVector analytic_idv_two_set(const DecentralizedProblem& problem, const MixingMatrix& mix,
                                 std::int64_t gap_iters) {
  check_problem(problem, mix);
  const int m = mix.graph.m;
  const int d = problem.d;
  if (m < 2) throw std::invalid_argument("analytic_idv_two_set: need at least two agents");
  // supported family: agent 0 against identical agents 1..m-1 on the
  // hub-plus-clique topology
  if (mix.graph.degree(0) != 1 || mix.graph.neighbors[0][0] != 1)
    throw std::invalid_argument("analytic_idv_two_set: agent 0 must attach only to agent 1");
  for (int i = 1; i < m; ++i)
    if (mix.graph.degree(i) != (i == 1 ? m - 1 : m - 2))
      throw std::invalid_argument("analytic_idv_two_set: agents 1..m-1 must form a clique");
  for (int i = 2; i < m; ++i)
    if (!sets_equal(problem.local_sets[1], problem.local_sets[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("analytic_idv_two_set: agents 1..m-1 must share one set");

  // u = minimum-norm element of closure(C_0 - C_1); the closest pair need not
  // be attained, the alternating-projection gap still converges to it
  const std::vector<double> u = gap_vector(problem.local_sets[0], problem.local_sets[1],
                                           gap_iters);

  // limiting agent states y_0 in C_0 and y_1 = ... = y_{m-1} in C_1 differ by
  // u; the w-part of the displacement is -(1/2)(y_i - sum_j W_ij y_j)
  BlockVector v(pgextra_layout(m, d));
  const double w01 = mix.w(0, 1);
  for (int a = 0; a < d; ++a) {
    v.data[static_cast<std::size_t>((m + 0) * d + a)] = -0.5 * w01 * u[static_cast<std::size_t>(a)];
    v.data[static_cast<std::size_t>((m + 1) * d + a)] = +0.5 * w01 * u[static_cast<std::size_t>(a)];
  }
  return v;
}

AveragedOperator condat_vu_operator(const DecentralizedProblem& problem,
                                    const MixingMatrix& mix) {
  check_problem(problem, mix);
  const int m = mix.graph.m;
  const int d = problem.d;
  const double tau = problem.tau;
  const Matrix u_half = mixing_sqrt_half(mix);

  std::vector<int> dims(static_cast<std::size_t>(m), d);
  dims.push_back(m * d);
  BlockLayout layout{dims};

  auto sets = problem.local_sets;
  Matrix w_mat = mix.w;
  return AveragedOperator(
      layout, 0.5,
      [m, d, tau, u_half, w_mat, sets = std::move(sets)](std::span<const double> in,
                                                         std::span<double> out) {
        const std::size_t half = static_cast<std::size_t>(m * d);
        std::vector<double> arg(static_cast<std::size_t>(d));
        // x-part: Prox of the mixed state; u-part: u + (1/tau) U x
        for (int i = 0; i < m; ++i) {
          for (int a = 0; a < d; ++a) {
            double wx = 0.0, uu = 0.0;
            for (int jj = 0; jj < m; ++jj) {
              wx += w_mat(i, jj) * in[static_cast<std::size_t>(jj * d + a)];
              uu += u_half(i, jj) * in[half + static_cast<std::size_t>(jj * d + a)];
            }
            arg[static_cast<std::size_t>(a)] = wx - tau * uu;
          }
          sets[static_cast<std::size_t>(i)].project_into(
              arg, out.subspan(static_cast<std::size_t>(i * d), static_cast<std::size_t>(d)));
        }
        for (int i = 0; i < m; ++i) {
          for (int a = 0; a < d; ++a) {
            double ux = 0.0;
            for (int jj = 0; jj < m; ++jj)
              ux += u_half(i, jj) * in[static_cast<std::size_t>(jj * d + a)];
            out[half + static_cast<std::size_t>(i * d + a)] =
                in[half + static_cast<std::size_t>(i * d + a)] + ux / tau;
          }
        }
      });
}

PgExtraSplit pgextra_friedrichs_split(const MixingMatrix& mix, double tau, int d, double alpha) {
  const int m = mix.w.rows();
  const Metric metric = build_condat_vu_metric(mix, tau, d);
  const int n = 2 * m * d;

  std::vector<int> dims(static_cast<std::size_t>(m), d);
  dims.push_back(m * d);
  BlockLayout layout{dims};

  NonOrthogonalSplit split = NonOrthogonalSplit::checked(layout, m, alpha, metric);

  std::vector<BlockVector> basis_u, basis_x;
  for (int c = 0; c < m * d; ++c) {
    BlockVector eu(layout), ex(layout);
    eu.data[static_cast<std::size_t>(m * d + c)] = 1.0;
    ex.data[static_cast<std::size_t>(c)] = 1.0;
    basis_u.push_back(std::move(eu));
    basis_x.push_back(std::move(ex));
  }
  (void)n;
  SubspacePair pair = SubspacePair::checked(std::move(basis_u), std::move(basis_x), metric);
  return PgExtraSplit{std::move(split), std::move(pair)};
}

BlockVector cv_state_to_xw(const BlockVector& ux, const MixingMatrix& mix, double tau, int d) {
  const int m = mix.w.rows();
  if (ux.dim() != 2 * m * d) throw std::invalid_argument("cv_state_to_xw: dimension mismatch");
  const Matrix u_half = mixing_sqrt_half(mix);
  BlockVector out(pgextra_layout(m, d));
  const std::size_t half = static_cast<std::size_t>(m * d);
  for (std::size_t i = 0; i < half; ++i) out.data[i] = ux.data[i];
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < d; ++a) {
      double acc = 0.0;
      for (int jj = 0; jj < m; ++jj)
        acc += u_half(i, jj) * ux.data[half + static_cast<std::size_t>(jj * d + a)];
      out.data[half + static_cast<std::size_t>(i * d + a)] = tau * acc;
    }
  return out;
}

}  // namespace rcfpi
