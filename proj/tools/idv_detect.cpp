// idv-detect: experiment driver and infeasibility-detection CLI.
//
// Subcommands: one per experiment (reproducible CSV/JSON/SVG artifacts), plus
// `detect run` and `detect variance-curve` for ad-hoc instances described by
// a JSON config. Exit codes: 0 all checks pass, 1 a check failed, 2 error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rcfpi/csv.hpp"
#include "rcfpi/detect.hpp"
#include "rcfpi/experiments.hpp"
#include "rcfpi/json_io.hpp"

namespace {

rcfpi::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  rcfpi::json j;
  is >> j;
  return j;
}

int run_experiment_command(const std::string& name, const std::string& config_path,
                           std::uint64_t seed, bool seed_from_cli, const std::string& out_dir) {
  rcfpi::ExperimentConfig cfg;
  cfg.experiment = name;
  cfg.seed = seed;
  cfg.out_dir = out_dir;
  if (!config_path.empty()) {
    rcfpi::json j = load_json(config_path);
    if (j.contains("seed") && !seed_from_cli) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("overrides"))
      cfg.overrides = j.at("overrides");
    else
      cfg.overrides = j;
    cfg.overrides.erase("seed");
  }

  const rcfpi::ExperimentResult result = rcfpi::run_experiment(cfg);
  for (const auto& c : result.checks)
    std::printf("%s %s: measured=%.10g bound=%.10g tol=%.3g\n", c.pass ? "[PASS]" : "[FAIL]",
                c.name.c_str(), c.measured, c.bound, c.tol);
  for (const auto& a : result.artifacts) std::printf("wrote %s\n", a.c_str());
  std::printf("%s: %s\n", result.name.c_str(), result.all_pass() ? "all checks passed"
                                                                 : "CHECK FAILURES");
  return result.all_pass() ? 0 : 1;
}

struct RcfpiInstance {
  rcfpi::AveragedOperator op;
  rcfpi::SelectionDistribution dist;
  rcfpi::BlockVector x0;
};

RcfpiInstance instance_from_json(const rcfpi::json& j) {
  rcfpi::AveragedOperator op = rcfpi::operator_from_json(j.at("operator"));
  rcfpi::SelectionDistribution dist = rcfpi::selection_from_json(j.at("selection"));
  rcfpi::BlockVector x0(op.layout());
  if (j.contains("x0")) {
    const auto values = j.at("x0").get<std::vector<double>>();
    x0 = rcfpi::BlockVector(op.layout(), values);
  }
  return {std::move(op), std::move(dist), std::move(x0)};
}

int run_detect_run(const std::string& config_path, std::uint64_t seed) {
  const rcfpi::json j = load_json(config_path);
  RcfpiInstance inst = instance_from_json(j);
  rcfpi::json dj = j.at("detection");
  if (!dj.contains("alpha")) dj["alpha"] = inst.dist.alpha();
  if (!dj.contains("beta")) dj["beta"] = rcfpi::beta_orthonormal(inst.dist);
  if (!dj.contains("theta")) dj["theta"] = inst.op.theta();
  const rcfpi::DetectionConfig cfg = rcfpi::detection_config_from_json(dj);

  const std::int64_t budget = rcfpi::required_iterations(cfg);
  const std::int64_t k = std::max<std::int64_t>(budget, j.value("k", std::int64_t{0}));
  const rcfpi::Trajectory traj = rcfpi::run_rcfpi(inst.op, inst.dist, inst.x0, k, seed);
  const rcfpi::DetectionReport report = rcfpi::infeasibility_test(traj, cfg, rcfpi::Metric());
  std::cout << rcfpi::to_json(report).dump(2) << '\n';
  return 0;
}

int run_detect_variance_curve(const std::string& config_path, std::uint64_t seed,
                              const std::string& out_path) {
  const rcfpi::json j = load_json(config_path);
  RcfpiInstance inst = instance_from_json(j);
  const auto ks = j.at("ks").get<std::vector<std::int64_t>>();
  const int n_samples = j.value("n_samples", 1000);

  const auto curve = rcfpi::estimate_variance_curve(inst.op, inst.dist, inst.x0, ks, n_samples,
                                                    seed, rcfpi::Metric());
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  rcfpi::CsvWriter csv(*os);
  csv.field("k").field("k_var").field("std_error");
  csv.end_row();
  for (const auto& p : curve) {
    csv.field(p.k).field(p.k_var).field(p.std_error);
    csv.end_row();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized coordinate fixed-point iterations: experiments and "
               "infeasibility detection"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  for (const std::string& name : rcfpi::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON file with parameter overrides");
    sub->add_option("--seed", seed, "base RNG seed");
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI::App* detect = app.add_subcommand("detect", "ad-hoc detection on a JSON instance");
  detect->require_subcommand(1);
  std::string detect_config;
  std::uint64_t detect_seed = 1;
  std::string curve_out = "-";
  CLI::App* detect_run = detect->add_subcommand("run", "run the infeasibility test");
  detect_run->add_option("--config", detect_config, "instance config JSON")->required();
  detect_run->add_option("--seed", detect_seed, "RNG seed");
  CLI::App* detect_curve =
      detect->add_subcommand("variance-curve", "Monte-Carlo variance curve as CSV");
  detect_curve->add_option("--config", detect_config, "instance config JSON")->required();
  detect_curve->add_option("--seed", detect_seed, "RNG seed");
  detect_curve->add_option("--out", curve_out, "output CSV path, '-' for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const std::string& name : rcfpi::experiment_names())
      if (app.got_subcommand(name)) {
        const bool seed_from_cli = app.get_subcommand(name)->count("--seed") > 0;
        return run_experiment_command(name, config_path, seed, seed_from_cli, out_dir);
      }
    if (detect->got_subcommand("run")) return run_detect_run(detect_config, detect_seed);
    if (detect->got_subcommand("variance-curve"))
      return run_detect_variance_curve(detect_config, detect_seed, curve_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
