#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgp/harness.hpp"
#include "lgp/reconstruct.hpp"
#include "random_suite.hpp"

using namespace lgp;

namespace {

constexpr double kPi = std::numbers::pi;
const double kA = std::sqrt(2.0) / 2.0;

ConvexDomain unit_disc() { return ConvexDomain::disc({0.0, 0.0}, 1.0); }
ConvexDomain square() { return ConvexDomain::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

BoundaryBV upper_indicator() {
  BoundaryPiece top{0.0, kPi, PieceKind::Constant, 1.0, {}};
  BoundaryPiece bottom{kPi, 2 * kPi, PieceKind::Constant, 0.0, {}};
  return BoundaryBV(2 * kPi, {top, bottom});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericFailure;
}

double face_area_sum(const PlanarSolution& sol) {
  double s = 0.0;
  for (const Face& f : sol.faces()) s += f.area;
  return s;
}

}  // namespace

TEST_CASE("one diameter splits the disc into two half discs") {
  const LeastGradientResult r = solve_least_gradient(unit_disc(), upper_indicator(), 8);
  const PlanarSolution& sol = r.solution;
  REQUIRE(sol.faces().size() == 2);
  for (const Face& f : sol.faces()) CHECK(f.area == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(evaluate_u(sol, {0.0, 0.5}) == 1.0);
  CHECK(evaluate_u(sol, {0.2, -0.5}) == 0.0);
  CHECK(total_variation_solution(sol) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.jump(0) == doctest::Approx(1.0));
  CHECK(code_of([&] { sol.locate({0.3, 0.0}); }) == ErrorCode::OnJumpSet);
  CHECK(code_of([&] { sol.locate({2.0, 0.0}); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("constant datum gives one face") {
  const LeastGradientResult r = solve_least_gradient(square(), BoundaryBV::constant(8.0, -1.5), 8);
  CHECK_FALSE(r.measure.has_value());
  REQUIRE(r.solution.faces().size() == 1);
  CHECK(evaluate_u(r.solution, {0.3, 0.1}) == -1.5);
  CHECK(r.solution.faces()[0].area == doctest::Approx(4.0));
  CHECK(total_variation_solution(r.solution) == 0.0);
}

TEST_CASE("the four square sides bound one enclosed face") {
  const ConvexDomain d = unit_disc();
  auto at_deg = [&](double a) { return d.at(a * kPi / 180.0); };
  const TransportPlan plan = make_plan({{at_deg(45), at_deg(135), 1.0},
                                        {at_deg(225), at_deg(135), 1.0},
                                        {at_deg(225), at_deg(315), 1.0},
                                        {at_deg(45), at_deg(315), 1.0}},
                                       CostNorm::euclidean());
  const Arrangement arr = build_arrangement(plan, d);
  REQUIRE(arr.faces.size() == 5);
  std::size_t enclosed = 0;
  double area = 0.0;
  for (const Face& f : arr.faces) {
    area += f.area;
    if (f.enclosed) {
      ++enclosed;
      CHECK(f.area == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(f.arcs.empty());
      CHECK(f.chords.size() == 4);
    }
  }
  CHECK(enclosed == 1);
  CHECK(area == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("crossing chords and chords on flat edges are rejected") {
  const ConvexDomain d = unit_disc();
  const TransportPlan crossing = make_plan({{d.at(0.0), d.at(kPi), 1.0}, {d.at(kPi / 2), d.at(1.5 * kPi), 1.0}},
                                           CostNorm::euclidean());
  CHECK(code_of([&] { build_arrangement(crossing, d); }) == ErrorCode::CrossingSegments);
  const ConvexDomain sq = square();
  const TransportPlan flat = make_plan({{sq.at(4.0), sq.at(2.0), 1.0}}, CostNorm::euclidean());
  CHECK(code_of([&] { build_arrangement(flat, sq); }) == ErrorCode::BoundaryMass);
}

TEST_CASE("the smooth example is reproduced") {
  const LeastGradientResult r = solve_least_gradient(unit_disc(), brothers_g1(4096), 64);
  CHECK(evaluate_u(r.solution, {0.9, 0.01}) == doctest::Approx(0.62).epsilon(0.05));
  CHECK(std::abs(evaluate_u(r.solution, {0.1, 0.13})) < 0.05);
  CHECK(evaluate_u(r.solution, {0.05, -0.85}) == doctest::Approx(1.0 - 2 * 0.85 * 0.85).epsilon(0.05));
  CHECK(face_area_sum(r.solution) == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("the discontinuous example has a central enclosed face") {
  const LeastGradientResult r = solve_least_gradient(unit_disc(), brothers_g2(1024), 32);
  std::vector<const Face*> enclosed;
  for (const Face& f : r.solution.faces())
    if (f.enclosed) enclosed.push_back(&f);
  REQUIRE(enclosed.size() == 1);
  const Face& c = *enclosed.front();
  CHECK(c.area == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c.lo == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(c.hi == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(c.value) < 0.02);
  CHECK(evaluate_u(r.solution, {0.1, 0.2}) == c.value);
  // Outside the square the datum's pieces carry on as 2x² and −2y².
  CHECK(evaluate_u(r.solution, {0.85, 0.1}) == doctest::Approx(2 * 0.85 * 0.85).epsilon(0.05));
  CHECK(evaluate_u(r.solution, {0.1, -0.85}) == doctest::Approx(-2 * 0.85 * 0.85).epsilon(0.05));
}

TEST_CASE("negating the datum negates the solution") {
  const BoundaryBV g = brothers_g2(256);
  const LeastGradientResult pos = solve_least_gradient(unit_disc(), g, 16);
  const LeastGradientResult neg = solve_least_gradient(unit_disc(), g.scaled(-1.0), 16);
  for (Vec2 p : {Vec2{0.1, 0.2}, Vec2{0.8, 0.05}, Vec2{-0.3, 0.85}}) {
    CHECK(evaluate_u(neg.solution, p) == doctest::Approx(-evaluate_u(pos.solution, p)).epsilon(1e-9));
  }
}

TEST_CASE("structural properties on random instances") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t solved = 0;
  for (const auto& inst : testing::random_suite(60, 40, 31)) {
    const TransportPlan plan = solve_kantorovich(inst.measure, CostNorm::euclidean());
    PlanarSolution sol;
    try {
      sol = assign_face_values(build_arrangement(plan, inst.domain), inst.datum,
                               2.0 * inst.measure.max_diffuse_mass());
    } catch (const Error& e) {
      // Plans that run along a flat edge have no planar solution.
      CHECK(e.code() == ErrorCode::BoundaryMass);
      continue;
    }
    ++solved;
    CHECK(face_area_sum(sol) == doctest::Approx(inst.domain.area()).epsilon(1e-9));
    const double tv = total_variation_solution(sol);
    CHECK(tv <= 0.5 * inst.domain.diameter() * total_variation_boundary(inst.datum) + 1e-9);

    bool purely_atomic = true;
    for (const BoundaryPiece& p : inst.datum.pieces()) purely_atomic &= p.kind == PieceKind::Constant;
    if (purely_atomic) CHECK(tv == doctest::Approx(plan.cost).epsilon(1e-9));

    // Trace: just inside a boundary point away from atoms, u matches g.
    if (purely_atomic) {
      const double L = inst.domain.boundary_length();
      for (int k = 0; k < 10; ++k) {
        const double s = unit(rng) * L;
        bool near_jump = false;
        for (const BoundaryJump& j : inst.datum.jumps()) {
          double gap = std::abs(j.s - s);
          near_jump |= std::min(gap, L - gap) < 1e-3 * L;
        }
        if (near_jump) continue;
        const BoundaryPoint b = inst.domain.at(s);
        try {
          CHECK(evaluate_u(sol, b.xy + 1e-7 * L * b.inner_normal) == doctest::Approx(inst.datum.value(s)));
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::OnJumpSet);
        }
      }
    }

    // Any short segment whose endpoints straddle a level must meet a chord.
    const Box box = inst.domain.bounding_box();
    for (int k = 0; k < 40; ++k) {
      const Vec2 p{box.min.x + unit(rng) * (box.max.x - box.min.x), box.min.y + unit(rng) * (box.max.y - box.min.y)};
      const Vec2 q = p + 0.05 * Vec2{unit(rng) - 0.5, unit(rng) - 0.5};
      if (!inst.domain.contains(p, -1e-6) || !inst.domain.contains(q, -1e-6)) continue;
      double up = 0.0, uq = 0.0;
      try {
        up = evaluate_u(sol, p);
        uq = evaluate_u(sol, q);
      } catch (const Error&) {
        continue;
      }
      if (up == uq) continue;
      bool met = false;
      for (const ArrangementChord& c : sol.chords()) met |= segments_cross(p, q, c.a, c.b, 0.0);
      CHECK(met);
    }
  }
  CHECK(solved > 20);
}
