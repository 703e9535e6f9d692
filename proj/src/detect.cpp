#include "rcfpi/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rcfpi/parallel.hpp"

namespace rcfpi {

DetectionConfig DetectionConfig::checked(double epsilon, double delta, double p, double alpha,
                                         double beta, double theta, double safety) {
  DetectionConfig cfg;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.p = p;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.theta = theta;
  cfg.safety = safety;
  cfg.validate();
  return cfg;
}

void DetectionConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("DetectionConfig: epsilon must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("DetectionConfig: delta must be nonnegative");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("DetectionConfig: p must be in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("DetectionConfig: alpha must be in (0,1]");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("DetectionConfig: theta must be in (0,1]");
  if (beta < alpha * alpha - 1e-12)
    throw std::invalid_argument("DetectionConfig: beta below alpha^2");
  if (!(epsilon > alpha * delta))
    throw std::invalid_argument("DetectionConfig: epsilon <= alpha*delta makes the test vacuous");
  if (!(beta * theta < alpha))
    throw std::invalid_argument("DetectionConfig: beta*theta < alpha required");
  if (!(safety >= 1.0)) throw std::invalid_argument("DetectionConfig: safety must be >= 1");
}

std::int64_t required_iterations(const DetectionConfig& cfg) {
  cfg.validate();
  if (cfg.delta == 0.0) return 1;
  const double gap = cfg.epsilon - cfg.alpha * cfg.delta;
  const double k = cfg.safety * (cfg.beta - cfg.alpha * cfg.alpha) * cfg.delta * cfg.delta /
                   (cfg.p * gap * gap);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(k)));
}

DetectionReport infeasibility_test(const Trajectory& traj, const DetectionConfig& cfg,
                                   const Metric& m) {
  const std::int64_t budget = required_iterations(cfg);
  if (traj.k_final < budget)
    throw std::invalid_argument("infeasibility_test: trajectory ran " +
                                std::to_string(traj.k_final) + " iterations, budget requires " +
                                std::to_string(budget));
  DetectionReport report;
  report.budget_k = budget;
  report.k_used = traj.k_final;
  BlockVector normalized = traj.final_iterate;
  const double inv = 1.0 / static_cast<double>(traj.k_final);
  for (double& v : normalized.data) v *= inv;
  report.statistic = m.norm(normalized.data);
  report.verdict = (report.statistic >= cfg.epsilon && report.k_used >= budget)
                       ? DetectionVerdict::reject_null
                       : DetectionVerdict::no_reject;
  return report;
}

double variance_bound(double alpha, double beta, double v_norm_m) {
  if (beta < alpha * alpha - 1e-12)
    throw std::invalid_argument("variance_bound: beta below alpha^2");
  return (beta - alpha * alpha) * v_norm_m * v_norm_m;
}

namespace {

struct RcfpiSampler {
  const AveragedOperator& t;
  const SelectionDistribution& dist;
  const BlockVector& x0;
  std::uint64_t seed;

  // one trajectory, capturing x^k/k at each requested k (ks ascending)
  void run(std::int64_t sample_id, const std::vector<std::int64_t>& ks,
           std::vector<std::vector<double>>& out) const {
    const BlockLayout& layout = t.layout();
    RngStream rng(seed, static_cast<std::uint64_t>(sample_id));
    std::vector<double> x = x0.data;
    std::vector<double> s(x.size());
    const double theta = t.theta();
    std::size_t next = 0;
    for (std::int64_t j = 0; j < ks.back(); ++j) {
      t.displacement_into(x, s);
      const SelectionVector& sel = dist.sample(rng);
      for (int b = 0; b < layout.blocks(); ++b) {
        const double si = sel.entries[b];
        if (si == 0.0) continue;
        const double step = theta * si;
        const int off = layout.offset(b);
        for (int i = off; i < off + layout.dim(b); ++i) x[i] -= step * s[i];
      }
      while (next < ks.size() && ks[next] == j + 1) {
        std::vector<double>& slot = out[next];
        const double inv = 1.0 / static_cast<double>(j + 1);
        for (std::size_t i = 0; i < x.size(); ++i) slot[i] = x[i] * inv;
        if (!std::isfinite(slot[0]))
          throw std::runtime_error("non-finite iterate in sample " + std::to_string(sample_id));
        ++next;
      }
    }
  }
};

}  // namespace

std::vector<VariancePoint> estimate_variance_curve(const AveragedOperator& t,
                                                   const SelectionDistribution& dist,
                                                   const BlockVector& x0,
                                                   std::vector<std::int64_t> ks, int n_samples,
                                                   std::uint64_t seed, const Metric& m) {
  if (n_samples < 2) throw std::invalid_argument("estimate_variance_curve: need >= 2 samples");
  if (ks.empty() || ks.front() < 1 ||
      std::adjacent_find(ks.begin(), ks.end(), [](std::int64_t a, std::int64_t b) {
        return a >= b;
      }) != ks.end())
    throw std::invalid_argument(
        "estimate_variance_curve: ks must be strictly increasing and >= 1");
  const std::size_t dim = x0.data.size();
  const std::size_t nk = ks.size();

  // per-sample normalized iterates at every k, slots indexed by sample id
  std::vector<std::vector<std::vector<double>>> samples(
      static_cast<std::size_t>(n_samples),
      std::vector<std::vector<double>>(nk, std::vector<double>(dim)));
  RcfpiSampler sampler{t, dist, x0, seed};
  parallel_for(n_samples, [&](std::int64_t i) {
    sampler.run(i, ks, samples[static_cast<std::size_t>(i)]);
  });

  std::vector<VariancePoint> curve(nk);
  std::vector<double> sum(dim), msv(dim);
  for (std::size_t c = 0; c < nk; ++c) {
    const double n = static_cast<double>(n_samples);
    std::fill(sum.begin(), sum.end(), 0.0);
    double sq_sum = 0.0;
    std::vector<double> sq(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
      const auto& xi = samples[static_cast<std::size_t>(i)][c];
      sq[static_cast<std::size_t>(i)] = m.norm_squared(xi);
      sq_sum += sq[static_cast<std::size_t>(i)];
      for (std::size_t d = 0; d < dim; ++d) sum[d] += xi[d];
    }
    const double kf = static_cast<double>(ks[c]);
    m.apply(sum, msv);  // <sum, x_i>_M = msv . x_i
    const double sum_sq = m.norm_squared(sum);
    const double var = std::max(0.0, sq_sum / n - sum_sq / (n * n));

    // leave-one-out replicates of k * Var
    double jack_mean = 0.0;
    std::vector<double> reps(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
      const auto& xi = samples[static_cast<std::size_t>(i)][c];
      double cross = 0.0;
      for (std::size_t d = 0; d < dim; ++d) cross += msv[d] * xi[d];
      const double rest_sq = sum_sq - 2.0 * cross + sq[static_cast<std::size_t>(i)];
      const double var_i =
          (sq_sum - sq[static_cast<std::size_t>(i)]) / (n - 1.0) - rest_sq / ((n - 1.0) * (n - 1.0));
      reps[static_cast<std::size_t>(i)] = kf * std::max(0.0, var_i);
      jack_mean += reps[static_cast<std::size_t>(i)];
    }
    jack_mean /= n;
    double ss = 0.0;
    for (double r : reps) ss += (r - jack_mean) * (r - jack_mean);

    curve[c].k = ks[c];
    curve[c].k_var = kf * var;
    curve[c].std_error = std::sqrt((n - 1.0) / n * ss);
  }
  return curve;
}

BiasEstimate bias_bound_check(const AveragedOperator& t, const SelectionDistribution& dist,
                              const BlockVector& x0, std::int64_t k, int n_samples,
                              const BlockVector& v_ref, const Metric& m, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("bias_bound_check: need >= 2 samples");
  if (v_ref.layout != x0.layout)
    throw std::invalid_argument("bias_bound_check: reference vector layout mismatch");
  const double alpha = dist.alpha();
  const std::vector<std::int64_t> ks{k};

  std::vector<double> values(static_cast<std::size_t>(n_samples));
  RcfpiSampler sampler{t, dist, x0, seed};
  parallel_for(n_samples, [&, k](std::int64_t i) {
    std::vector<std::vector<double>> slot(1, std::vector<double>(x0.data.size()));
    sampler.run(i, ks, slot);
    std::vector<double> diff = slot[0];
    for (std::size_t d = 0; d < diff.size(); ++d) diff[d] += alpha * v_ref.data[d];
    values[static_cast<std::size_t>(i)] = static_cast<double>(k) * m.norm_squared(diff);
  });

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n_samples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  BiasEstimate est;
  est.estimate = mean;
  est.std_error = std::sqrt(ss / (static_cast<double>(n_samples) - 1.0) /
                            static_cast<double>(n_samples));
  return est;
}

VariancePoint k_variance_with_jackknife(std::span<const BlockVector> samples, std::int64_t k,
                                        const Metric& m) {
  if (samples.size() < 2)
    throw std::invalid_argument("k_variance_with_jackknife: need >= 2 samples");
  const double n = static_cast<double>(samples.size());
  const std::size_t dim = samples.front().data.size();
  std::vector<double> sum(dim, 0.0), msv(dim);
  std::vector<double> sq(samples.size());
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sq[i] = m.norm_squared(samples[i].data);
    sq_sum += sq[i];
    for (std::size_t d = 0; d < dim; ++d) sum[d] += samples[i].data[d];
  }
  m.apply(sum, msv);
  const double sum_sq = m.norm_squared(sum);
  const double kf = static_cast<double>(k);

  double jack_mean = 0.0;
  std::vector<double> reps(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double cross = 0.0;
    for (std::size_t d = 0; d < dim; ++d) cross += msv[d] * samples[i].data[d];
    const double rest_sq = sum_sq - 2.0 * cross + sq[i];
    const double var_i = (sq_sum - sq[i]) / (n - 1.0) - rest_sq / ((n - 1.0) * (n - 1.0));
    reps[i] = kf * std::max(0.0, var_i);
    jack_mean += reps[i];
  }
  jack_mean /= n;
  double ss = 0.0;
  for (double r : reps) ss += (r - jack_mean) * (r - jack_mean);

  VariancePoint out;
  out.k = k;
  out.k_var = kf * std::max(0.0, sq_sum / n - sum_sq / (n * n));
  out.std_error = std::sqrt((n - 1.0) / n * ss);
  return out;
}

std::vector<BlockVector> ensemble_normalized(const AveragedOperator& t,
                                             const SelectionDistribution& dist,
                                             const BlockVector& x0, std::int64_t k,
                                             int n_samples, std::uint64_t seed) {
  std::vector<BlockVector> out(static_cast<std::size_t>(n_samples));
  const std::vector<std::int64_t> ks{k};
  RcfpiSampler sampler{t, dist, x0, seed};
  parallel_for(n_samples, [&](std::int64_t i) {
    std::vector<std::vector<double>> slot(1, std::vector<double>(x0.data.size()));
    sampler.run(i, ks, slot);
    out[static_cast<std::size_t>(i)] = BlockVector(x0.layout, std::move(slot[0]));
  });
  return out;
}

}  // namespace rcfpi
