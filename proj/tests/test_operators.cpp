#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rcfpi/operators.hpp"
#include "rcfpi/rng.hpp"
#include "rcfpi/selection.hpp"

using namespace rcfpi;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ConvexSet set_a() { return ConvexSet::box_corner({-10.0, -5.0}); }
ConvexSet set_b() {
  return ConvexSet::neighborhood(set_a(), 3.0, 2.0 * std::sqrt(125.0));
}
ConvexSet set_c() { return ConvexSet::halfspace({-2.0, -1.0}, 25.0); }

// independent oracle: golden-section minimization of the distance to the
// boundary curve (t, -1/t) over t > 0
double golden_section_hyperbola(double px, double py) {
  auto h = [&](double t) {
    const double dy = -1.0 / t - py;
    return (t - px) * (t - px) + dy * dy;
  };
  double lo = 1e-9, hi = 1e6;
  // shrink to a unimodal bracket around the best grid point first
  double best_t = lo;
  double best_h = h(lo);
  for (int i = 0; i <= 4000; ++i) {
    const double t = lo * std::pow(hi / lo, i / 4000.0);
    if (h(t) < best_h) {
      best_h = h(t);
      best_t = t;
    }
  }
  lo = best_t / 1.1;
  hi = best_t * 1.1;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  for (int i = 0; i < 200; ++i) {
    if (h(c) < h(d)) {
      hi = d;
    } else {
      lo = c;
    }
    c = hi - phi * (hi - lo);
    d = lo + phi * (hi - lo);
  }
  return 0.5 * (lo + hi);
}

std::vector<double> random_point(int dim, RngStream& rng, double scale) {
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (double& v : p) v = scale * (2.0 * rng.uniform() - 1.0);
  return p;
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct CatalogEntry {
  const char* name;
  AveragedOperator op;
};

std::vector<CatalogEntry> catalog_2d() {
  std::vector<CatalogEntry> out;
  out.push_back({"translation", AveragedOperator::translation(BlockLayout::scalar(2), {1, 1})});
  out.push_back({"coupled_shift", AveragedOperator::coupled_shift_2d()});
  out.push_back({"proj_A", AveragedOperator::scaled_projection(set_a(), 0.2)});
  out.push_back({"proj_B", AveragedOperator::scaled_projection(set_b(), 0.2)});
  out.push_back({"proj_C", AveragedOperator::scaled_projection(set_c(), 0.2)});
  out.push_back({"proj_hyperbola",
                 AveragedOperator::scaled_projection(ConvexSet::hyperbola_region(), 0.5)});
  return out;
}

}  // namespace

TEST_CASE("projection onto the corner box") {
  const auto a = set_a();
  CHECK(a.project({0.0, 0.0}) == std::vector<double>{-10, -5});
  CHECK(a.project({-12.0, -7.0}) == std::vector<double>{-12, -7});
  CHECK(a.contains(std::vector<double>{-10, -5}));
  CHECK_FALSE(a.contains(std::vector<double>{0, -5}));
}

TEST_CASE("projection onto the halfspace") {
  const auto c = set_c();
  const auto p = c.project({0.0, 0.0});
  CHECK(p[0] == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(c.project({-20.0, -10.0}) == std::vector<double>{-20, -10});
}

TEST_CASE("projection onto the neighborhood set") {
  const auto b = set_b();
  // interior point of the scaled base projects to itself
  CHECK(b.project({-35.0, -20.0}) == std::vector<double>{-35, -20});
  // the origin lands at the shared minimum-norm element
  const auto p = b.project({0.0, 0.0});
  CHECK(p[0] == doctest::Approx(-10.0).epsilon(1e-10));
  CHECK(p[1] == doctest::Approx(-5.0).epsilon(1e-10));
}

TEST_CASE("projection onto the hyperbola region") {
  const auto h = ConvexSet::hyperbola_region();
  SUBCASE("feasible point is unchanged") {
    CHECK(h.project({1.0, -2.0}) == std::vector<double>{1, -2});
  }
  SUBCASE("boundary stationarity at the frozen quartic root") {
    const auto p = h.project({0.5, 0.0});
    // positive root of t^4 - t^3/2 - 1 = 0, cross-checked by the oracle below
    CHECK(p[0] == doctest::Approx(1.1527765807183080).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(-1.0 / p[0]).epsilon(1e-12));
    const double g = std::pow(p[0], 4) - 0.5 * std::pow(p[0], 3) - 1.0;
    CHECK(std::fabs(g) < 1e-10);
  }
  SUBCASE("matches the golden-section oracle on random infeasible points") {
    RngStream rng(11);
    auto objective = [](double t, double px, double py) {
      const double dy = -1.0 / t - py;
      return (t - px) * (t - px) + dy * dy;
    };
    for (int trial = 0; trial < 300; ++trial) {
      // mixed scales, covering the deep drift the decentralized runs produce
      const double scale = (trial % 3 == 0) ? 8.0 : (trial % 3 == 1) ? 200.0 : 5000.0;
      const double px = scale * (2.0 * rng.uniform() - 1.0);
      const double py = scale * (2.0 * rng.uniform() - 1.0);
      if (px > 0.0 && px * py <= -1.0) continue;
      const auto p = h.project({px, py});
      const double t_oracle = golden_section_hyperbola(px, py);
      // the oracle localizes the foot up to its value-comparison plateau and
      // upper-bounds the attainable squared distance
      const double plateau = 1e-6 * (1.0 + t_oracle) +
                             2.0 * std::sqrt(1e-16 * (1.0 + objective(t_oracle, px, py)));
      CHECK(std::fabs(p[0] - t_oracle) <= plateau);
      CHECK(objective(p[0], px, py) <=
            objective(t_oracle, px, py) * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("projection idempotence and firm nonexpansiveness across the catalog") {
  RngStream rng(3);
  const ConvexSet sets[] = {set_a(), set_b(), set_c(), ConvexSet::hyperbola_region(),
                            ConvexSet::product({set_a(), set_c()})};
  for (const auto& set : sets) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto p = random_point(set.dim(), rng, 30.0);
      const auto q = random_point(set.dim(), rng, 30.0);
      const auto pp = set.project(p);
      const auto pq = set.project(q);
      CHECK(dist2(set.project(pp), pp) < 1e-18);
      CHECK(std::sqrt(dist2(pp, pq)) <= std::sqrt(dist2(p, q)) + 1e-10);
      // firm: <Pp - Pq, p - q> >= ||Pp - Pq||^2
      double inner = 0.0;
      for (std::size_t i = 0; i < pp.size(); ++i)
        inner += (pp[i] - pq[i]) * (p[i] - q[i]);
      CHECK(inner >= dist2(pp, pq) - 1e-9 * (1.0 + dist2(pp, pq)));
    }
  }
}

TEST_CASE("apply examples") {
  const auto zero = BlockVector::scalar_blocks({0, 0});

  const auto trans = AveragedOperator::translation(BlockLayout::scalar(2), {1, 1});
  CHECK(trans.apply(zero).data == std::vector<double>{-1, -1});

  const auto coupled = AveragedOperator::coupled_shift_2d();
  CHECK(coupled.apply(zero).data == std::vector<double>{-0.5, -0.5});

  const auto proj_a = AveragedOperator::scaled_projection(set_a(), 0.2);
  const auto out = proj_a.apply(zero);
  CHECK(out.data[0] == doctest::Approx(2.0));
  CHECK(out.data[1] == doctest::Approx(1.0));

  CHECK_THROWS(trans.apply(BlockVector::scalar_blocks({1, 2, 3})));
}

TEST_CASE("displacement examples") {
  const auto zero = BlockVector::scalar_blocks({0, 0});

  const auto trans = AveragedOperator::translation(BlockLayout::scalar(2), {1, 1});
  CHECK(trans.displacement(zero).data == std::vector<double>{1, 1});
  CHECK(trans.displacement(BlockVector::scalar_blocks({5, -3})).data ==
        std::vector<double>{1, 1});

  const auto coupled = AveragedOperator::coupled_shift_2d();
  CHECK(coupled.displacement(zero).data == std::vector<double>{1, 1});

  // displacement of I - theta Proj is the projection itself
  RngStream rng(5);
  const auto proj_c = AveragedOperator::scaled_projection(set_c(), 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 20.0));
    const auto sx = proj_c.displacement(x);
    const auto expected = set_c().project(x.data);
    CHECK(sx.data[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(sx.data[1] == doctest::Approx(expected[1]).epsilon(1e-12));
  }
}

TEST_CASE("coordinate_update examples") {
  const auto trans = AveragedOperator::translation(BlockLayout::scalar(2), {1, 1});
  const auto zero = BlockVector::scalar_blocks({0, 0});

  CHECK(trans.coordinate_update(SelectionVector::all_ones(2), zero).data ==
        trans.apply(zero).data);
  CHECK(trans.coordinate_update(SelectionVector({0, 0}), zero).data == zero.data);
  CHECK(trans.coordinate_update(SelectionVector({1, 0}), zero).data ==
        std::vector<double>{-1, 0});
  CHECK_THROWS(trans.coordinate_update(SelectionVector({1}), zero));
}

TEST_CASE("scaled projection basics") {
  CHECK_THROWS(AveragedOperator::scaled_projection(set_a(), 0.0));
  CHECK_THROWS(AveragedOperator::scaled_projection(set_a(), 1.5));

  // theta = 1 with the whole space: T collapses everything to zero
  const auto whole = ConvexSet::box_corner({kInf, kInf});
  const auto t = AveragedOperator::scaled_projection(whole, 1.0);
  const auto out = t.apply(BlockVector::scalar_blocks({3, -4}));
  CHECK(out.data == std::vector<double>{0, 0});
}

TEST_CASE("infimal displacement of scaled projections") {
  const auto va = infimal_displacement_of_scaled_projection(set_a(), 0.2);
  CHECK(va.data[0] == doctest::Approx(-2.0));
  CHECK(va.data[1] == doctest::Approx(-1.0));

  const auto vc = infimal_displacement_of_scaled_projection(set_c(), 0.2);
  CHECK(vc.data[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(vc.data[1] == doctest::Approx(-1.0).epsilon(1e-12));

  const auto vb = infimal_displacement_of_scaled_projection(set_b(), 0.2);
  CHECK(vb.data[0] == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(vb.data[1] == doctest::Approx(-1.0).epsilon(1e-10));

  const auto v0 =
      infimal_displacement_of_scaled_projection(ConvexSet::box_corner({5.0, 5.0}), 0.7);
  CHECK(v0.data == std::vector<double>{0, 0});
}

TEST_CASE("displacements are 1/2-cocoercive across the catalog") {
  RngStream rng(17);
  for (const auto& entry : catalog_2d()) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 25.0));
      const auto y = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 25.0));
      const auto sx = entry.op.displacement(x);
      const auto sy = entry.op.displacement(y);
      const auto ds = sx - sy;
      const auto dx = x - y;
      double inner = 0.0, ds_sq = 0.0;
      for (std::size_t i = 0; i < ds.data.size(); ++i) {
        inner += ds.data[i] * dx.data[i];
        ds_sq += ds.data[i] * ds.data[i];
      }
      CHECK(inner >= 0.5 * ds_sq - 1e-10 * (1.0 + ds_sq));
    }
  }
}

TEST_CASE("masked update is nonexpansive in expectation when beta theta <= alpha") {
  RngStream rng(23);
  const auto dists = {SelectionDistribution::uniform_single_coordinate(2),
                      SelectionDistribution::finite_support(
                          {{SelectionVector({0.5, 1.0}), 0.5},
                           {SelectionVector({1.0, 0.5}), 0.5}})};
  for (const auto& entry : catalog_2d()) {
    for (const auto& dist : dists) {
      const double beta = beta_exact_enumeration(dist, Metric(), entry.op.layout());
      if (beta * entry.op.theta() > dist.alpha() + 1e-12) continue;
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 25.0));
        const auto y = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 25.0));
        double expect = 0.0;
        for (std::size_t s = 0; s < dist.support_size(); ++s) {
          const auto tx = entry.op.coordinate_update(dist.atom(s), x);
          const auto ty = entry.op.coordinate_update(dist.atom(s), y);
          expect += dist.prob(s) * dist2(tx.data, ty.data);
        }
        CHECK(expect <= dist2(x.data, y.data) + 1e-10 * (1.0 + dist2(x.data, y.data)));
      }
    }
  }
}

TEST_CASE("enumerated mean of masked updates equals the averaged surrogate") {
  RngStream rng(29);
  const auto dists = {SelectionDistribution::uniform_single_coordinate(2),
                      SelectionDistribution::finite_support(
                          {{SelectionVector({1, 0}), 0.25},
                           {SelectionVector({0, 1}), 0.25},
                           {SelectionVector({1, 1}), 0.5}})};
  for (const auto& entry : catalog_2d()) {
    for (const auto& dist : dists) {
      const auto surrogate = averaged_surrogate(entry.op, dist.alpha());
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = BlockVector(BlockLayout::scalar(2), random_point(2, rng, 25.0));
        BlockVector mean(x.layout);
        for (std::size_t s = 0; s < dist.support_size(); ++s) {
          const auto tx = entry.op.coordinate_update(dist.atom(s), x);
          for (std::size_t i = 0; i < mean.data.size(); ++i)
            mean.data[i] += dist.prob(s) * tx.data[i];
        }
        const auto expected = surrogate.apply(x);
        for (std::size_t i = 0; i < mean.data.size(); ++i)
          CHECK(mean.data[i] ==
                doctest::Approx(expected.data[i]).epsilon(1e-12).scale(1.0 + 25.0));
      }
    }
  }
}

TEST_CASE("gap vector of touching and separated sets") {
  // sets sharing a point have a zero gap
  const auto g0 = gap_vector(ConvexSet::box_corner({0.0, 0.0}),
                             ConvexSet::halfspace({1.0, 0.0}, -1.0), 2000);
  CHECK(std::sqrt(dist2(g0, std::vector<double>{0, 0})) < 1e-9);

  // two parallel halfspaces with a unit gap
  const auto g1 = gap_vector(ConvexSet::halfspace({-1.0, 0.0}, 1.0),
                             ConvexSet::halfspace({1.0, 0.0}, 0.0), 2000);
  CHECK(g1[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(g1[1] == doctest::Approx(0.0).epsilon(1e-9));
}
