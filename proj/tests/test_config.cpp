#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rcfpi/json_io.hpp"

using namespace rcfpi;

TEST_CASE("block vector JSON round trip") {
  const BlockVector v(BlockLayout({2, 1}), {1.5, -2.0, 3.0});
  const json j = to_json(v);
  CHECK(j.at("block_dims").get<std::vector<int>>() == std::vector<int>{2, 1});
  const BlockVector back = block_vector_from_json(j);
  CHECK(back.layout == v.layout);
  CHECK(back.data == v.data);
}

TEST_CASE("convex sets from config") {
  const json box = {{"kind", "box_corner"}, {"upper", {-10.0, "inf"}}};
  const auto s1 = convex_set_from_json(box);
  CHECK(s1.kind() == ConvexSet::Kind::box_corner);
  CHECK(s1.project({0.0, 7.0}) == std::vector<double>{-10.0, 7.0});

  const json nb = {{"kind", "neighborhood"},
                   {"base", {{"kind", "box_corner"}, {"upper", {-10.0, -5.0}}}},
                   {"scale", 3.0},
                   {"radius", 22.360679774997898}};
  const auto s2 = convex_set_from_json(nb);
  CHECK(s2.kind() == ConvexSet::Kind::neighborhood);

  const json prod = {{"kind", "product"},
                     {"parts",
                      {{{"kind", "hyperbola_region"}},
                       {{"kind", "halfspace"}, {"normal", {-2.0, -1.0}}, {"offset", 25.0}}}}};
  CHECK(convex_set_from_json(prod).dim() == 4);

  CHECK_THROWS(convex_set_from_json(json{{"kind", "sphere"}}));
}

TEST_CASE("operators from config") {
  const json scaled = {{"kind", "scaled_projection"},
                       {"set", {{"kind", "box_corner"}, {"upper", {-10.0, -5.0}}}},
                       {"theta", 0.2}};
  const auto t = operator_from_json(scaled);
  CHECK(t.theta() == 0.2);
  const auto out = t.apply(BlockVector::scalar_blocks({0, 0}));
  CHECK(out.data[0] == doctest::Approx(2.0));

  const json trans = {{"kind", "translation"}, {"shift", {1.0, 1.0}}};
  CHECK(operator_from_json(trans).theta() == 1.0);

  CHECK(operator_from_json(json{{"kind", "coupled_shift_2d"}}).theta() == 0.5);
  CHECK_THROWS(operator_from_json(json{{"kind", "mystery"}}));
}

TEST_CASE("selection distributions from config") {
  const auto u = selection_from_json(json{{"kind", "uniform_single"}, {"m", 3}});
  CHECK(u.alpha() == doctest::Approx(1.0 / 3.0));

  const json support = {{"support",
                         {{{"vector", {1.0, 0.0}}, {"prob", 0.5}},
                          {{"vector", {0.0, 1.0}}, {"prob", 0.5}}}}};
  CHECK(selection_from_json(support).support_size() == 2);

  const auto hub = selection_from_json(json{{"kind", "hub_weighted"}, {"m", 40}});
  CHECK(hub.alpha() == doctest::Approx(0.7 / 39.0));

  CHECK_THROWS(selection_from_json(json{{"kind", "adaptive"}, {"m", 2}}));
}

TEST_CASE("network from config") {
  const auto preset = network_from_json(json{{"m", 6}, {"edges", "star1_clique"}});
  CHECK(preset.degree(0) == 1);

  const json explicit_edges = {{"m", 3}, {"edges", {{0, 1}, {1, 2}}}};
  const auto path = network_from_json(explicit_edges);
  CHECK(path.degree(1) == 2);

  CHECK_THROWS(network_from_json(json{{"m", 4}, {"edges", "ring"}}));

  const auto mix = mixing_from_json(
      json{{"m", 3}, {"edges", {{0, 1}, {1, 2}}}, {"epsilon_w", 0.05}});
  CHECK(mix.w(0, 1) == doctest::Approx(1.0 / 2.05));
}

TEST_CASE("detection config and report JSON") {
  const json j = {{"epsilon", 0.5}, {"delta", 0.1},  {"p", 0.05},
                  {"alpha", 0.5},   {"beta", 0.5},   {"theta", 0.5}};
  const auto cfg = detection_config_from_json(j);
  CHECK(required_iterations(cfg) == 1);

  DetectionReport r;
  r.k_used = 10;
  r.statistic = 0.7;
  r.verdict = DetectionVerdict::reject_null;
  r.budget_k = 1;
  const json out = to_json(r);
  CHECK(out.at("verdict") == "reject_null");
  CHECK(out.at("significance") == "asymptotic");
}
