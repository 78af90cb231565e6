#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgp/geometry.hpp"

using namespace lgp;

namespace {

ConvexDomain unit_disc() { return ConvexDomain::disc({0.0, 0.0}, 1.0); }
ConvexDomain square() { return ConvexDomain::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

bool near(Vec2 a, Vec2 b, double tol = 1e-12) { return distance(a, b) <= tol; }

}  // namespace

TEST_CASE("boundary_param on the unit disc") {
  const ConvexDomain d = unit_disc();
  const BoundaryPoint p0 = boundary_param(d, 0.0);
  CHECK(near(p0.xy, {1.0, 0.0}));
  CHECK(near(p0.tangent, {0.0, 1.0}));
  CHECK(near(p0.inner_normal, {-1.0, 0.0}));
  CHECK(near(boundary_param(d, std::numbers::pi / 2).xy, {0.0, 1.0}));
  // Coordinates wrap modulo the perimeter.
  CHECK(near(boundary_param(d, 2 * std::numbers::pi + 0.3).xy, boundary_param(d, 0.3).xy));
}

TEST_CASE("boundary_param on the square walks edges from vertex 0") {
  const ConvexDomain sq = square();
  CHECK(sq.boundary_length() == doctest::Approx(8.0));
  CHECK(near(boundary_param(sq, 0.0).xy, {1.0, -1.0}));
  CHECK(near(boundary_param(sq, 1.0).xy, {1.0, 0.0}));
  CHECK(near(boundary_param(sq, 1.0).tangent, {0.0, 1.0}));
  CHECK(near(boundary_param(sq, 3.0).xy, {0.0, 1.0}));
  CHECK(near(boundary_param(sq, 3.0).inner_normal, {0.0, -1.0}));
  CHECK(sq.edge_of(2.5) == 1);
}

TEST_CASE("projection onto the closed domain") {
  const ConvexDomain d = unit_disc();
  CHECK(near(project_to_boundary(d, {2.0, 0.0}).xy, {1.0, 0.0}));
  CHECK(near(project_to_boundary(d, {1.0, 0.0}).xy, {1.0, 0.0}));
  const ConvexDomain sq = square();
  CHECK(near(project_to_boundary(sq, {2.0, 2.0}).xy, {1.0, 1.0}));
  CHECK(near(project_to_boundary(sq, {0.0, 3.0}).xy, {0.0, 1.0}));
  CHECK(project_to_boundary(sq, {0.0, 3.0}).s == doctest::Approx(3.0));
  try {
    project_to_boundary(d, {0.1, 0.2});
    FAIL("interior point accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InteriorPoint);
  }
}

TEST_CASE("diameter, area and perimeter") {
  CHECK(diameter(unit_disc()) == doctest::Approx(2.0));
  CHECK(diameter(square()) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(unit_disc().boundary_length() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
  CHECK(unit_disc().area() == doctest::Approx(std::numbers::pi));
  CHECK(square().area() == doctest::Approx(4.0));
}

TEST_CASE("invalid domains are rejected") {
  auto code_of = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::NumericFailure;
  };
  CHECK(code_of([] { ConvexDomain::disc({0, 0}, 0.0); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { ConvexDomain::polygon({{0, 0}, {1, 0}, {2, 0}}); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { ConvexDomain::polygon({{0, 0}, {0, 1}, {1, 0}}); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { ConvexDomain::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}); }) ==
        ErrorCode::InvalidDomain);
}

TEST_CASE("Hausdorff distance between boundary curves") {
  CHECK(hausdorff_boundary_distance(unit_disc(), unit_disc()) == doctest::Approx(0.0));
  CHECK(hausdorff_boundary_distance(unit_disc(), ConvexDomain::disc({0, 0}, 1.2)) ==
        doctest::Approx(0.2).epsilon(1e-9));
  CHECK(hausdorff_boundary_distance(unit_disc(), square()) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("frames stay orthonormal along the boundary") {
  for (const ConvexDomain& d : {unit_disc(), square(), ConvexDomain::polygon({{0, 0}, {3, 0}, {1, 2}})}) {
    for (int k = 0; k < 97; ++k) {
      const BoundaryPoint b = d.at(d.boundary_length() * k / 97.0);
      CHECK(norm(b.tangent) == doctest::Approx(1.0));
      CHECK(std::abs(dot(b.tangent, b.inner_normal)) < 1e-12);
      CHECK(cross(b.tangent, b.inner_normal) > 0.0);
      CHECK(std::abs(d.signed_distance(b.xy)) < 1e-12);
    }
  }
}

TEST_CASE("projection is near the identity just outside and contracts distances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ConvexDomain domains[] = {unit_disc(), square(), ConvexDomain::polygon({{0, 0}, {3, 0}, {1, 2}})};
  for (const ConvexDomain& d : domains) {
    for (int k = 0; k < 200; ++k) {
      const BoundaryPoint b = d.at(unit(rng) * d.boundary_length());
      const double eps = 1e-6 * (1.0 + unit(rng));
      const BoundaryPoint q = project_to_boundary(d, b.xy - eps * b.inner_normal);
      CHECK(distance(q.xy, b.xy) <= 2.0 * eps + 1e-12);

      const Vec2 p1 = d.center() + Vec2{10 * unit(rng) - 5, 10 * unit(rng) - 5};
      const Vec2 p2 = d.center() + Vec2{10 * unit(rng) - 5, 10 * unit(rng) - 5};
      if (d.signed_distance(p1) <= 0 || d.signed_distance(p2) <= 0) continue;
      CHECK(distance(project_to_boundary(d, p1).xy, project_to_boundary(d, p2).xy) <= distance(p1, p2) + 1e-12);
    }
  }
}

TEST_CASE("diameter is invariant under rotation") {
  std::vector<Vec2> v{{0, 0}, {3, 0}, {4, 1}, {1, 2}};
  const double d0 = diameter(ConvexDomain::polygon(v));
  for (double t : {0.3, 1.1, 2.9}) {
    std::vector<Vec2> r;
    for (Vec2 p : v) r.push_back({p.x * std::cos(t) - p.y * std::sin(t), p.x * std::sin(t) + p.y * std::cos(t)});
    CHECK(diameter(ConvexDomain::polygon(r)) == doctest::Approx(d0).epsilon(1e-12));
  }
}
