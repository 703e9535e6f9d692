#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace rcfpi {

/// One named check of an experiment: measured value against a bound or an
/// expected value at a tolerance.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string comparison;  // "abs_diff<=tol", "<=bound+tol", ">=bound-tol"

  static CheckResult close_to(std::string name, double measured, double expected, double tol);
  static CheckResult at_most(std::string name, double measured, double bound, double tol = 0.0);
  static CheckResult at_least(std::string name, double measured, double bound, double tol = 0.0);
};

struct ExperimentResult {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  nlohmann::json extra;

  bool all_pass() const;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  nlohmann::json overrides = nlohmann::json::object();
};

/// Known experiment names, in the order the acceptance suite runs them.
const std::vector<std::string>& experiment_names();

/// Runs one experiment, writes its CSV/SVG artifacts and summary.json under
/// out_dir/<experiment>/, and returns the checks.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace rcfpi
