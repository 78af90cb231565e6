#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgp/fields.hpp"
#include "lgp/harness.hpp"
#include "random_suite.hpp"

using namespace lgp;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexDomain unit_disc() { return ConvexDomain::disc({0.0, 0.0}, 1.0); }
ConvexDomain square() { return ConvexDomain::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

BoundaryPoint pt(Vec2 xy) { return BoundaryPoint{0.0, xy, {}, {}}; }

// Cells of side 0.5; row 1 is [−0.25, 0.25).
GridSpec strip_grid() { return GridSpec{{-1.0, -0.75}, 0.5, 4, 3}; }

}  // namespace

TEST_CASE("a horizontal diameter deposits its length row by row") {
  const TransportPlan plan = make_plan({{pt({-1, 0}), pt({1, 0}), 1.0}}, CostNorm::euclidean());
  const DensityGrid g = rasterize_density(plan, strip_grid());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.cell_sigma(i, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g.cell_sigma(i, 0) == 0.0);
    CHECK(g.cell_sigma(i, 2) == 0.0);
    CHECK(g.p_vec[1 * 4 + i].x == doctest::Approx(0.5));
    CHECK(g.p_vec[1 * 4 + i].y == 0.0);
  }
  CHECK(g.total_sigma() == doctest::Approx(2.0).epsilon(1e-14));
  const DensityNorms n = density_norms(g, 1.0);
  CHECK(n.lp == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(n.linf == doctest::Approx(2.0).epsilon(1e-14));  // 0.5 / 0.25
}

TEST_CASE("antiparallel segments cancel in p but add in σ") {
  const TransportPlan plan =
      make_plan({{pt({-1, 0}), pt({1, 0}), 1.0}, {pt({1, 0}), pt({-1, 0}), 1.0}}, CostNorm::euclidean());
  const DensityGrid g = rasterize_density(plan, strip_grid());
  CHECK(g.total_sigma() == doctest::Approx(4.0));
  for (const Vec2& p : g.p_vec) CHECK(norm(p) < 1e-14);
}

TEST_CASE("endpoints outside the grid are rejected") {
  const TransportPlan plan = make_plan({{pt({-3, 0}), pt({1, 0}), 1.0}}, CostNorm::euclidean());
  try {
    rasterize_density(plan, strip_grid());
    FAIL("grid too small accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooSmall);
  }
  const DensityGrid empty = rasterize_density(TransportPlan{}, strip_grid());
  CHECK(empty.total_sigma() == 0.0);
  CHECK(density_norms(empty, 2.0).lp == 0.0);
  CHECK(density_norms(empty, 2.0).linf == 0.0);
}

TEST_CASE("mass lying on a flat edge") {
  const ConvexDomain sq = square();
  const TransportPlan top = make_plan({{sq.at(4.0), sq.at(2.0), 1.0}}, CostNorm::euclidean());
  CHECK(boundary_mass(top, sq) == doctest::Approx(2.0));
  const auto by_edge = boundary_mass_by_edge(top, sq);
  REQUIRE(by_edge.size() == 4);
  CHECK(by_edge[1] == doctest::Approx(2.0));
  const DensityGrid g = rasterize_density(top, GridSpec::covering(sq, 32), &sq);
  CHECK(g.boundary_mass == doctest::Approx(2.0));
  CHECK(g.total_sigma() == 0.0);

  const TransportPlan across = make_plan({{sq.at(1.0), sq.at(5.0), 1.0}}, CostNorm::euclidean());
  CHECK(boundary_mass(across, sq) == 0.0);
  CHECK(segment_boundary_overlap({-1, 1}, {0.5, 1}, sq) == doctest::Approx(1.5));
  CHECK(segment_boundary_overlap({-1, 0}, {1, 0}, unit_disc()) == 0.0);
}

TEST_CASE("splitting a plan by atom origin") {
  const BoundaryMeasurePair sharp = make_measure_pair(unit_disc(), {{0.0, 1.0}}, {{kPi, 1.0}});
  const SbvSplit s1 = sbv_split(solve_kantorovich(sharp, CostNorm::euclidean()));
  CHECK(s1.jump_to_jump().cost == doctest::Approx(2.0));
  CHECK(s1.diffuse_to_diffuse().pairs.empty());

  const BoundaryMeasurePair smooth = discretize(unit_disc(), tangential_derivative(brothers_g1(1024)), 16);
  const TransportPlan plan = solve_kantorovich(smooth, CostNorm::euclidean());
  const SbvSplit s2 = sbv_split(plan);
  CHECK(s2.jump_to_jump().pairs.empty());
  CHECK(s2.jump_to_diffuse().pairs.empty());
  CHECK(s2.diffuse_to_jump().pairs.empty());
  CHECK(s2.diffuse_to_diffuse().cost == doctest::Approx(plan.cost).epsilon(1e-14));
}

TEST_CASE("σ mass identity on random instances") {
  for (const auto& inst : testing::random_suite(30, 40, 23)) {
    const TransportPlan plan = solve_kantorovich(inst.measure, CostNorm::euclidean());
    for (std::size_t n : {32, 64}) {
      const DensityGrid g = rasterize_density(plan, GridSpec::covering(inst.domain, n), &inst.domain);
      CHECK(std::abs(g.total_sigma() + g.boundary_mass - plan.cost) <= 1e-10 * std::max(1.0, plan.cost));
    }
    const SbvSplit split = sbv_split(plan);
    CHECK(std::abs(split.total_cost() - plan.cost) <= 1e-12 * std::max(1.0, plan.cost));
  }
}

TEST_CASE("σ stays bounded away from a single atom under refinement") {
  // g = s on the upper arc, then π until it drops to 0 at the bottom point.
  const ConvexDomain d = unit_disc();
  BoundaryPiece ramp{0.0, kPi, PieceKind::Samples, 0.0, {}};
  for (int k = 0; k <= 512; ++k) ramp.samples.push_back(kPi * k / 512.0);
  BoundaryPiece flat{kPi, 1.5 * kPi, PieceKind::Constant, kPi, {}};
  BoundaryPiece zero{1.5 * kPi, 2 * kPi, PieceKind::Constant, 0.0, {}};
  const BoundaryBV g(2 * kPi, {ramp, flat, zero});
  const BoundaryMeasurePair mu = discretize(d, tangential_derivative(g), 512);
  const TransportPlan plan = solve_kantorovich(mu, CostNorm::euclidean());
  const std::vector<ExclusionDisc> away{{{0.0, -1.0}, 0.3}};
  const double coarse = density_norms(rasterize_density(plan, GridSpec::covering(d, 32), &d), 2.0, away).linf;
  const double fine = density_norms(rasterize_density(plan, GridSpec::covering(d, 64), &d), 2.0, away).linf;
  CHECK(coarse > 0.0);
  CHECK(fine / coarse < 1.25);
  CHECK(fine / coarse > 0.8);
}
