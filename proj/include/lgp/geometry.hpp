#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lgp/error.hpp"

namespace lgp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
// Counterclockwise rotation by a quarter turn.
constexpr Vec2 rotate_quarter(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}

struct Box {
  Vec2 min;
  Vec2 max;
};

/// A point of the boundary curve together with its arc-length coordinate and
/// the local frame (counterclockwise tangent, inner unit normal).
struct BoundaryPoint {
  double s = 0.0;
  Vec2 xy;
  Vec2 tangent;
  Vec2 inner_normal;
};

enum class DomainKind { Disc, Polygon };
enum class ConvexityClass { StrictlyConvex, ConvexNotStrict };

/// Open bounded convex planar set: a disc or a convex polygon with vertices in
/// counterclockwise order. Boundary points are addressed by arc length measured
/// counterclockwise from angle 0 (disc) or from vertex 0 (polygon).
class ConvexDomain {
 public:
  static ConvexDomain disc(Vec2 center, double radius);
  static ConvexDomain polygon(std::vector<Vec2> vertices);

  DomainKind kind() const { return kind_; }
  ConvexityClass convexity_class() const {
    return kind_ == DomainKind::Disc ? ConvexityClass::StrictlyConvex
                                     : ConvexityClass::ConvexNotStrict;
  }
  double boundary_length() const { return length_; }
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }
  std::span<const Vec2> vertices() const { return vertices_; }
  // Arc-length coordinate of vertex i (polygon only); edge i spans
  // [vertex_s(i), vertex_s(i + 1)).
  double vertex_s(std::size_t i) const { return cumulative_[i]; }
  std::size_t edge_count() const { return vertices_.size(); }

  /// Boundary point at arc length s; s is reduced modulo the perimeter.
  BoundaryPoint at(double s) const;
  /// Arc-length coordinate of the boundary point nearest to p.
  double arc_coordinate(Vec2 p) const;
  /// Signed distance to the boundary curve, negative inside.
  double signed_distance(Vec2 p) const;
  bool contains(Vec2 p, double tol = 0.0) const { return signed_distance(p) <= tol; }
  double area() const;
  double diameter() const;
  Box bounding_box() const;
  /// Homothety about the center (disc) or the vertex centroid (polygon).
  ConvexDomain scaled(double factor) const;
  /// Characteristic length used to scale geometric tolerances.
  double scale() const { return diameter(); }
  /// Index of the polygon edge containing arc coordinate s.
  std::size_t edge_of(double s) const;

 private:
  ConvexDomain() = default;

  DomainKind kind_ = DomainKind::Disc;
  Vec2 center_;
  double radius_ = 0.0;
  std::vector<Vec2> vertices_;
  std::vector<double> cumulative_;
  double length_ = 0.0;
};

BoundaryPoint boundary_param(const ConvexDomain& domain, double s);

/// Orthogonal projection onto the closed convex set for points outside or on
/// the boundary. Throws InteriorPoint for points strictly inside.
BoundaryPoint project_to_boundary(const ConvexDomain& domain, Vec2 p);

double diameter(const ConvexDomain& domain);

/// Symmetric Hausdorff distance between the two boundary curves. Each curve
/// is sampled with `samples` points (plus polygon vertices) and the exact
/// distance to the other curve is taken, so the result is accurate to
/// O(perimeter / samples).
double hausdorff_boundary_distance(const ConvexDomain& a, const ConvexDomain& b,
                                   std::size_t samples = 4096);

/// Reduce s into [0, length).
double wrap_arc(double s, double length);

}  // namespace lgp
