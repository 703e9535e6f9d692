#pragma once

#include <cstdint>
#include <vector>

#include "rcfpi/engine.hpp"

namespace rcfpi {

/// Parameters of the normalized-iterate infeasibility test. The null
/// hypothesis is ||v||_M <= delta; rejecting it at level p requires the
/// iteration budget below.
struct DetectionConfig {
  double epsilon = 0.0;  // test threshold on ||x^k/k||_M
  double delta = 0.0;    // null-hypothesis bound on ||v||_M
  double p = 0.0;        // asymptotic significance level
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double safety = 1.0;  // multiplies the budget; the bound is asymptotic

  static DetectionConfig checked(double epsilon, double delta, double p, double alpha,
                                 double beta, double theta, double safety = 1.0);
  void validate() const;
};

enum class DetectionVerdict { reject_null, no_reject };

struct DetectionReport {
  std::int64_t k_used = 0;
  double statistic = 0.0;  // ||x^k/k||_M at the final checkpoint
  DetectionVerdict verdict = DetectionVerdict::no_reject;
  std::int64_t budget_k = 0;
};

/// ceil(safety * (beta - alpha^2) delta^2 / (p (epsilon - alpha delta)^2)),
/// and 1 when delta = 0.
std::int64_t required_iterations(const DetectionConfig& cfg);

/// Evaluates the test on a finished trajectory; the run must cover the budget.
DetectionReport infeasibility_test(const Trajectory& traj, const DetectionConfig& cfg,
                                   const Metric& m);

/// (beta - alpha^2) ||v||_M^2, the asymptotic bound on k Var_M(x^k/k).
double variance_bound(double alpha, double beta, double v_norm_m);

struct VariancePoint {
  std::int64_t k = 0;
  double k_var = 0.0;      // k times the sample M-variance of x^k/k
  double std_error = 0.0;  // jackknife standard error of k_var
};

/// Monte-Carlo estimate of k Var_M(x^k/k) at each requested k. Trajectories
/// fan out to a worker pool; sample i always uses stream (seed, i), so the
/// output does not depend on scheduling.
std::vector<VariancePoint> estimate_variance_curve(const AveragedOperator& t,
                                                   const SelectionDistribution& dist,
                                                   const BlockVector& x0,
                                                   std::vector<std::int64_t> ks, int n_samples,
                                                   std::uint64_t seed, const Metric& m);

struct BiasEstimate {
  double estimate = 0.0;  // k E||x^k/k + alpha v||_M^2
  double std_error = 0.0;
};

/// Monte-Carlo check of the asymptotic bias bound against a reference
/// displacement vector.
BiasEstimate bias_bound_check(const AveragedOperator& t, const SelectionDistribution& dist,
                              const BlockVector& x0, std::int64_t k, int n_samples,
                              const BlockVector& v_ref, const Metric& m,
                              std::uint64_t seed = 0);

/// Normalized iterates x^k/k of n independent runs (stream i = sample i).
std::vector<BlockVector> ensemble_normalized(const AveragedOperator& t,
                                             const SelectionDistribution& dist,
                                             const BlockVector& x0, std::int64_t k,
                                             int n_samples, std::uint64_t seed);

/// k times the sample M-variance of the given normalized iterates, with its
/// jackknife standard error.
VariancePoint k_variance_with_jackknife(std::span<const BlockVector> samples, std::int64_t k,
                                        const Metric& m);

}  // namespace rcfpi
