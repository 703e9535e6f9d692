#include "rcfpi/json_io.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace rcfpi {

namespace {

std::vector<double> doubles(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_string() && (v == "inf" || v == "+inf")) {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      out.push_back(v.get<double>());
    }
  }
  return out;
}

}  // namespace

json to_json(const BlockVector& v) {
  return json{{"block_dims", v.layout.block_dims()}, {"data", v.data}};
}

BlockVector block_vector_from_json(const json& j) {
  BlockLayout layout(j.at("block_dims").get<std::vector<int>>());
  return BlockVector(std::move(layout), j.at("data").get<std::vector<double>>());
}

ConvexSet convex_set_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box_corner") return ConvexSet::box_corner(doubles(j.at("upper")));
  if (kind == "halfspace")
    return ConvexSet::halfspace(doubles(j.at("normal")), j.at("offset").get<double>());
  if (kind == "neighborhood")
    return ConvexSet::neighborhood(convex_set_from_json(j.at("base")),
                                   j.at("scale").get<double>(), j.at("radius").get<double>());
  if (kind == "hyperbola_region") return ConvexSet::hyperbola_region();
  if (kind == "product") {
    std::vector<ConvexSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(convex_set_from_json(p));
    return ConvexSet::product(std::move(parts));
  }
  throw std::invalid_argument("unknown convex set kind: " + kind);
}

AveragedOperator operator_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "scaled_projection") {
    ConvexSet set = convex_set_from_json(j.at("set"));
    const double theta = j.at("theta").get<double>();
    if (j.contains("block_dims")) {
      BlockLayout layout(j.at("block_dims").get<std::vector<int>>());
      return AveragedOperator::scaled_projection(std::move(set), theta, std::move(layout));
    }
    return AveragedOperator::scaled_projection(std::move(set), theta);
  }
  if (kind == "translation") {
    std::vector<double> shift = doubles(j.at("shift"));
    const double theta = j.value("theta", 1.0);
    BlockLayout layout = j.contains("block_dims")
                             ? BlockLayout(j.at("block_dims").get<std::vector<int>>())
                             : BlockLayout::scalar(static_cast<int>(shift.size()));
    return AveragedOperator::translation(std::move(layout), std::move(shift), theta);
  }
  if (kind == "coupled_shift_2d") return AveragedOperator::coupled_shift_2d();
  throw std::invalid_argument("unknown operator kind: " + kind);
}

SelectionDistribution selection_from_json(const json& j) {
  if (j.contains("support")) {
    std::vector<std::pair<SelectionVector, double>> atoms;
    for (const auto& a : j.at("support"))
      atoms.emplace_back(SelectionVector(doubles(a.at("vector"))), a.at("prob").get<double>());
    return SelectionDistribution::finite_support(std::move(atoms));
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform_single")
    return SelectionDistribution::uniform_single_coordinate(j.at("m").get<int>());
  if (kind == "all_ones")
    return SelectionDistribution::deterministic(SelectionVector::all_ones(j.at("m").get<int>()));
  if (kind == "hub_weighted")
    return hub_weighted_single_coordinate(j.at("m").get<int>(), j.value("hub_prob", 0.3));
  throw std::invalid_argument("unknown selection kind: " + kind);
}

NetworkGraph network_from_json(const json& j) {
  const int m = j.at("m").get<int>();
  const auto& edges = j.at("edges");
  if (edges.is_string()) {
    if (edges == "star1_clique") return NetworkGraph::star_plus_clique(m);
    throw std::invalid_argument("unknown edge preset: " + edges.get<std::string>());
  }
  std::vector<std::pair<int, int>> list;
  for (const auto& e : edges) list.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return NetworkGraph::from_edges(m, list);
}

MixingMatrix mixing_from_json(const json& j) {
  return metropolis_matrix(network_from_json(j), j.at("epsilon_w").get<double>());
}

DetectionConfig detection_config_from_json(const json& j) {
  return DetectionConfig::checked(j.at("epsilon").get<double>(), j.at("delta").get<double>(),
                                  j.at("p").get<double>(), j.at("alpha").get<double>(),
                                  j.at("beta").get<double>(), j.at("theta").get<double>(),
                                  j.value("safety", 1.0));
}

json to_json(const DetectionReport& r) {
  return json{{"k_used", r.k_used},
              {"statistic", r.statistic},
              {"verdict", r.verdict == DetectionVerdict::reject_null ? "reject_null" : "no_reject"},
              {"budget_k", r.budget_k},
              {"significance", "asymptotic"}};
}

}  // namespace rcfpi
