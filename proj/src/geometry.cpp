#include "lgp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace lgp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::InvalidDatum: return "InvalidDatum";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InteriorPoint: return "InteriorPoint";
    case ErrorCode::ZeroMeasure: return "ZeroMeasure";
    case ErrorCode::ZeroVariation: return "ZeroVariation";
    case ErrorCode::Unbalanced: return "Unbalanced";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotOptimal: return "NotOptimal";
    case ErrorCode::InvalidNorm: return "InvalidNorm";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::CrossingSegments: return "CrossingSegments";
    case ErrorCode::BoundaryMass: return "BoundaryMass";
    case ErrorCode::InconsistentTrace: return "InconsistentTrace";
    case ErrorCode::OnJumpSet: return "OnJumpSet";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::OnCaseBoundary: return "OnCaseBoundary";
    case ErrorCode::NotStrictlyConvex: return "NotStrictlyConvex";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Closest point of segment [a, b] to p, with its parameter in [0, 1].
std::pair<Vec2, double> closest_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 d = b - a;
  const double dd = dot(d, d);
  double t = dd > 0.0 ? dot(p - a, d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return {a + t * d, t};
}

double distance_to_curve(const ConvexDomain& dom, Vec2 p) {
  return std::abs(dom.signed_distance(p));
}

}  // namespace

double wrap_arc(double s, double length) {
  double r = std::fmod(s, length);
  if (r < 0.0) r += length;
  if (r >= length) r = 0.0;
  return r;
}

ConvexDomain ConvexDomain::disc(Vec2 center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center.x) ||
      !std::isfinite(center.y)) {
    throw Error(ErrorCode::InvalidDomain, "disc radius must be positive and finite");
  }
  ConvexDomain d;
  d.kind_ = DomainKind::Disc;
  d.center_ = center;
  d.radius_ = radius;
  d.length_ = kTwoPi * radius;
  return d;
}

ConvexDomain ConvexDomain::polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorCode::InvalidDomain, "polygon needs at least 3 vertices");
  double extent = 0.0;
  for (const Vec2& v : vertices) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw Error(ErrorCode::InvalidDomain, "polygon vertex is not finite");
    }
    for (const Vec2& w : vertices) extent = std::max(extent, distance(v, w));
  }
  if (!(extent > 0.0)) throw Error(ErrorCode::InvalidDomain, "degenerate polygon");
  // Strict left turn at every vertex; collinear triples are rejected so that
  // maximal boundary segments coincide with edges.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    const Vec2 c = vertices[(i + 2) % n];
    const Vec2 e1 = b - a;
    const Vec2 e2 = c - b;
    if (norm(e1) <= 1e-12 * extent) {
      throw Error(ErrorCode::InvalidDomain, "repeated polygon vertex");
    }
    const double cr = cross(e1, e2);
    if (cr <= 1e-12 * extent * extent) {
      throw Error(ErrorCode::InvalidDomain,
                  "polygon must be strictly convex and counterclockwise (collinear or "
                  "reflex vertex at index " + std::to_string((i + 1) % n) + ")");
    }
    turning += std::atan2(cr, dot(e1, e2));
  }
  if (std::abs(turning - kTwoPi) > 1e-6) {
    throw Error(ErrorCode::InvalidDomain, "polygon is not simple (winds more than once)");
  }
  ConvexDomain d;
  d.kind_ = DomainKind::Polygon;
  d.vertices_ = std::move(vertices);
  d.cumulative_.resize(n + 1);
  d.cumulative_[0] = 0.0;
  Vec2 centroid;
  for (std::size_t i = 0; i < n; ++i) {
    d.cumulative_[i + 1] = d.cumulative_[i] + distance(d.vertices_[i], d.vertices_[(i + 1) % n]);
    centroid += d.vertices_[i];
  }
  d.length_ = d.cumulative_[n];
  d.center_ = centroid / static_cast<double>(n);
  return d;
}

std::size_t ConvexDomain::edge_of(double s) const {
  if (kind_ != DomainKind::Polygon) return 0;
  s = wrap_arc(s, length_);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, vertices_.size() - 1);
}

BoundaryPoint ConvexDomain::at(double s) const {
  BoundaryPoint bp;
  bp.s = wrap_arc(s, length_);
  if (kind_ == DomainKind::Disc) {
    const double theta = bp.s / radius_;
    const Vec2 radial{std::cos(theta), std::sin(theta)};
    bp.xy = center_ + radius_ * radial;
    bp.tangent = rotate_quarter(radial);
    bp.inner_normal = -radial;
    return bp;
  }
  const std::size_t k = edge_of(bp.s);
  const Vec2 a = vertices_[k];
  const Vec2 b = vertices_[(k + 1) % vertices_.size()];
  const double len = cumulative_[k + 1] - cumulative_[k];
  const double t = std::clamp((bp.s - cumulative_[k]) / len, 0.0, 1.0);
  bp.xy = a + t * (b - a);
  bp.tangent = (b - a) / len;
  bp.inner_normal = rotate_quarter(bp.tangent);
  return bp;
}

double ConvexDomain::arc_coordinate(Vec2 p) const {
  if (kind_ == DomainKind::Disc) {
    const Vec2 d = p - center_;
    double theta = std::atan2(d.y, d.x);
    if (theta < 0.0) theta += kTwoPi;
    return wrap_arc(theta * radius_, length_);
  }
  double best = std::numeric_limits<double>::infinity();
  double s = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto [q, t] = closest_on_segment(vertices_[k], vertices_[(k + 1) % n], p);
    const double dist = distance(q, p);
    if (dist < best) {
      best = dist;
      s = cumulative_[k] + t * (cumulative_[k + 1] - cumulative_[k]);
    }
  }
  return wrap_arc(s, length_);
}

double ConvexDomain::signed_distance(Vec2 p) const {
  if (kind_ == DomainKind::Disc) return distance(p, center_) - radius_;
  const std::size_t n = vertices_.size();
  double best = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = vertices_[k];
    const Vec2 b = vertices_[(k + 1) % n];
    if (cross(b - a, p - a) < 0.0) inside = false;
    best = std::min(best, distance(closest_on_segment(a, b, p).first, p));
  }
  return inside ? -best : best;
}

double ConvexDomain::area() const {
  if (kind_ == DomainKind::Disc) return std::numbers::pi * radius_ * radius_;
  double a = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) a += cross(vertices_[k], vertices_[(k + 1) % n]);
  return 0.5 * a;
}

double ConvexDomain::diameter() const {
  if (kind_ == DomainKind::Disc) return 2.0 * radius_;
  double d = 0.0;
  for (const Vec2& v : vertices_) {
    for (const Vec2& w : vertices_) d = std::max(d, distance(v, w));
  }
  return d;
}

Box ConvexDomain::bounding_box() const {
  if (kind_ == DomainKind::Disc) {
    return {center_ - Vec2{radius_, radius_}, center_ + Vec2{radius_, radius_}};
  }
  Box b{vertices_[0], vertices_[0]};
  for (const Vec2& v : vertices_) {
    b.min.x = std::min(b.min.x, v.x);
    b.min.y = std::min(b.min.y, v.y);
    b.max.x = std::max(b.max.x, v.x);
    b.max.y = std::max(b.max.y, v.y);
  }
  return b;
}

ConvexDomain ConvexDomain::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  if (kind_ == DomainKind::Disc) return disc(center_, radius_ * factor);
  std::vector<Vec2> v;
  v.reserve(vertices_.size());
  for (const Vec2& p : vertices_) v.push_back(center_ + factor * (p - center_));
  return polygon(std::move(v));
}

BoundaryPoint boundary_param(const ConvexDomain& domain, double s) { return domain.at(s); }

BoundaryPoint project_to_boundary(const ConvexDomain& domain, Vec2 p) {
  const double tol = 1e-12 * std::max(1.0, domain.scale());
  const double sd = domain.signed_distance(p);
  if (sd < -tol) {
    throw Error(ErrorCode::InteriorPoint, "point lies strictly inside the domain");
  }
  if (domain.kind() == DomainKind::Disc) {
    const Vec2 d = p - domain.center();
    const double n = norm(d);
    BoundaryPoint bp = domain.at(domain.arc_coordinate(p));
    // Radial projection; keep the exact ray direction rather than the
    // round-tripped angle.
    if (n > 0.0) bp.xy = domain.center() + (domain.radius() / n) * d;
    return bp;
  }
  const double s = domain.arc_coordinate(p);
  return domain.at(s);
}

double diameter(const ConvexDomain& domain) { return domain.diameter(); }

double hausdorff_boundary_distance(const ConvexDomain& a, const ConvexDomain& b,
                                   std::size_t samples) {
  samples = std::max<std::size_t>(samples, 8);
  auto one_sided = [samples](const ConvexDomain& from, const ConvexDomain& to) {
    double worst = 0.0;
    const double step = from.boundary_length() / static_cast<double>(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      worst = std::max(worst, distance_to_curve(to, from.at(step * static_cast<double>(i)).xy));
    }
    for (const Vec2& v : from.vertices()) worst = std::max(worst, distance_to_curve(to, v));
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace lgp
