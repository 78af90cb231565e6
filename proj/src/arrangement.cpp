#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "lgp/fields.hpp"
#include "lgp/reconstruct.hpp"

namespace lgp {

namespace {

constexpr double kArcStep = 2.0 * std::numbers::pi / 720.0;

double ccw_gap(double from, double to, double length) {
  double d = to - from;
  if (d < 0.0) d += length;
  return d;
}

struct Traversal {
  const ConvexDomain& domain;
  const std::vector<double>& vs;
  const std::vector<Vec2>& vxy;
  std::vector<ArrangementChord>& chords;
  // incident[w]: chord ids at vertex w sorted by increasing ccw offset of the far end.
  std::vector<std::vector<std::size_t>> incident;
  std::vector<std::vector<double>> offsets;

  std::size_t other(std::size_t c, std::size_t w) const { return chords[c].va == w ? chords[c].vb : chords[c].va; }
};

// Points strictly inside the ccw arc [s0, s0 + len] used for outlines and
// exact areas: polygon corners, or evenly spaced samples on a circle.
void arc_interior_points(const ConvexDomain& domain, double s0, double len, std::vector<Vec2>& corners,
                         std::vector<Vec2>& outline) {
  const double L = domain.boundary_length();
  if (domain.kind() == DomainKind::Polygon) {
    const std::size_t n = domain.edge_count();
    // Visit corners in ccw order starting after s0.
    std::vector<std::pair<double, Vec2>> hits;
    for (std::size_t k = 0; k < n; ++k) {
      const double off = ccw_gap(s0, domain.vertex_s(k), L);
      if (off > 0.0 && off < len) hits.push_back({off, domain.vertices()[k]});
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& h : hits) {
      corners.push_back(h.second);
      outline.push_back(h.second);
    }
    return;
  }
  const double theta = len / domain.radius();
  const auto steps = static_cast<std::size_t>(std::ceil(theta / kArcStep));
  for (std::size_t k = 1; k < steps; ++k) {
    outline.push_back(domain.at(s0 + len * static_cast<double>(k) / static_cast<double>(steps)).xy);
  }
}

double shoelace(const std::vector<Vec2>& loop) {
  double a = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) a += cross(loop[k], loop[(k + 1) % loop.size()]);
  return 0.5 * a;
}

Box outline_box(const std::vector<Vec2>& outline, double margin) {
  Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
        {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
  for (const Vec2& p : outline) {
    b.min.x = std::min(b.min.x, p.x);
    b.min.y = std::min(b.min.y, p.y);
    b.max.x = std::max(b.max.x, p.x);
    b.max.y = std::max(b.max.y, p.y);
  }
  b.min -= Vec2{margin, margin};
  b.max += Vec2{margin, margin};
  return b;
}

double arc_margin(const ConvexDomain& domain) {
  if (domain.kind() == DomainKind::Polygon) return 1e-9 * domain.scale();
  return domain.radius() * (1.0 - std::cos(0.5 * kArcStep)) + 1e-9 * domain.scale();
}

Face whole_domain_face(const ConvexDomain& domain) {
  Face f;
  const double L = domain.boundary_length();
  f.arcs.push_back({0.0, L});
  std::vector<Vec2> corners;
  f.outline.push_back(domain.at(0.0).xy);
  corners.push_back(f.outline.back());
  arc_interior_points(domain, 0.0, L, corners, f.outline);
  f.area = domain.area();
  f.box = outline_box(f.outline, arc_margin(domain));
  return f;
}

}  // namespace

Arrangement build_arrangement(const TransportPlan& plan, const ConvexDomain& domain) {
  Arrangement arr;
  arr.domain = domain;
  const double L = domain.boundary_length();
  const double merge_tol = 1e-9 * L;

  struct Endpoint {
    double s;
    Vec2 xy;
  };
  std::vector<Endpoint> ends;
  std::vector<std::pair<double, double>> pair_s;
  for (const PlanPair& p : plan.pairs) {
    const double sa = domain.arc_coordinate(p.source.xy);
    const double sb = domain.arc_coordinate(p.target.xy);
    pair_s.push_back({sa, sb});
    ends.push_back({sa, p.source.xy});
    ends.push_back({sb, p.target.xy});
  }
  if (ends.empty()) {
    arr.faces.push_back(whole_domain_face(domain));
    return arr;
  }
  std::sort(ends.begin(), ends.end(), [](const Endpoint& a, const Endpoint& b) { return a.s < b.s; });
  for (const Endpoint& e : ends) {
    if (arr.vertex_s.empty() || e.s - arr.vertex_s.back() > merge_tol) {
      arr.vertex_s.push_back(e.s);
      arr.vertex_xy.push_back(e.xy);
    }
  }
  // Close the cycle: a last vertex within tolerance of the first merges into it.
  if (arr.vertex_s.size() > 1 && arr.vertex_s.front() + L - arr.vertex_s.back() <= merge_tol) {
    arr.vertex_s.pop_back();
    arr.vertex_xy.pop_back();
  }
  const std::size_t V = arr.vertex_s.size();
  auto vertex_of = [&](double s) {
    auto it = std::lower_bound(arr.vertex_s.begin(), arr.vertex_s.end(), s - merge_tol);
    if (it == arr.vertex_s.end()) return std::size_t{0};
    return static_cast<std::size_t>(it - arr.vertex_s.begin());
  };

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
  for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
    const std::size_t va = vertex_of(pair_s[k].first);
    const std::size_t vb = vertex_of(pair_s[k].second);
    if (va == vb) continue;
    const auto key = std::minmax(va, vb);
    auto it = seen.find(key);
    if (it != seen.end()) {
      arr.chords[it->second].mass += plan.pairs[k].mass;
      continue;
    }
    ArrangementChord c;
    c.va = va;
    c.vb = vb;
    c.a = arr.vertex_xy[va];
    c.b = arr.vertex_xy[vb];
    c.mass = plan.pairs[k].mass;
    if (segment_boundary_overlap(c.a, c.b, domain) > 0.0) {
      throw Error(ErrorCode::BoundaryMass, "a transport segment runs along the boundary; no least gradient solution");
    }
    seen.emplace(key, arr.chords.size());
    arr.chords.push_back(c);
  }
  if (arr.chords.empty()) {
    arr.faces.push_back(whole_domain_face(domain));
    return arr;
  }

  // Chords with endpoints on a convex curve cross iff their endpoints interleave.
  const std::size_t C = arr.chords.size();
  for (std::size_t p = 0; p < C; ++p) {
    const auto [a0, a1] = std::minmax(arr.chords[p].va, arr.chords[p].vb);
    for (std::size_t q = p + 1; q < C; ++q) {
      const auto [b0, b1] = std::minmax(arr.chords[q].va, arr.chords[q].vb);
      if (b0 == a0 || b0 == a1 || b1 == a0 || b1 == a1) continue;
      const bool in0 = a0 < b0 && b0 < a1;
      const bool in1 = a0 < b1 && b1 < a1;
      if (in0 != in1) throw Error(ErrorCode::CrossingSegments, "transport segments cross in the interior");
    }
  }

  Traversal t{domain, arr.vertex_s, arr.vertex_xy, arr.chords, {}, {}};
  t.incident.resize(V);
  t.offsets.resize(V);
  for (std::size_t c = 0; c < C; ++c) {
    t.incident[arr.chords[c].va].push_back(c);
    t.incident[arr.chords[c].vb].push_back(c);
  }
  for (std::size_t w = 0; w < V; ++w) {
    auto& inc = t.incident[w];
    auto off = [&](std::size_t c) { return ccw_gap(arr.vertex_s[w], arr.vertex_s[t.other(c, w)], L); };
    std::sort(inc.begin(), inc.end(), [&](std::size_t a, std::size_t b) { return off(a) < off(b); });
    for (std::size_t c : inc) t.offsets[w].push_back(off(c));
  }

  // Half-edges: arc k runs ccw from vertex k to k + 1; chord c forward is va → vb.
  struct HalfEdge {
    bool arc;
    std::size_t id;
    bool forward;
  };
  std::vector<char> arc_seen(V, 0);
  std::vector<std::array<char, 2>> chord_seen(C, {0, 0});
  auto mark = [&](const HalfEdge& e) -> bool {
    char& flag = e.arc ? arc_seen[e.id] : chord_seen[e.id][e.forward ? 0 : 1];
    if (flag) return false;
    flag = 1;
    return true;
  };
  auto head = [&](const HalfEdge& e) {
    if (e.arc) return (e.id + 1) % V;
    return e.forward ? arr.chords[e.id].vb : arr.chords[e.id].va;
  };
  auto tail = [&](const HalfEdge& e) {
    if (e.arc) return e.id;
    return e.forward ? arr.chords[e.id].va : arr.chords[e.id].vb;
  };
  auto next = [&](const HalfEdge& e) -> HalfEdge {
    const std::size_t w = head(e);
    const auto& inc = t.incident[w];
    const auto& off = t.offsets[w];
    // Turn as far left as possible: the neighbour immediately clockwise of the
    // reversed incoming direction.
    double limit = L;
    if (!e.arc) limit = ccw_gap(arr.vertex_s[w], arr.vertex_s[tail(e)], L);
    const auto it = std::lower_bound(off.begin(), off.end(), limit - 0.5 * merge_tol);
    if (it == off.begin()) return {true, w, true};
    const std::size_t c = inc[static_cast<std::size_t>(it - off.begin()) - 1];
    return {false, c, arr.chords[c].va == w};
  };

  std::vector<HalfEdge> starts;
  for (std::size_t k = 0; k < V; ++k) starts.push_back({true, k, true});
  for (std::size_t c = 0; c < C; ++c) {
    starts.push_back({false, c, true});
    starts.push_back({false, c, false});
  }
  const double margin = arc_margin(domain);
  for (const HalfEdge& start : starts) {
    if (!mark(start)) continue;
    Face f;
    std::vector<Vec2> corners;
    double arc_area = 0.0;
    HalfEdge e = start;
    std::size_t guard = 0;
    while (true) {
      const std::size_t from = tail(e);
      f.outline.push_back(arr.vertex_xy[from]);
      corners.push_back(arr.vertex_xy[from]);
      if (e.arc) {
        const double len = ccw_gap(arr.vertex_s[from], arr.vertex_s[head(e)], L);
        const double span = V == 1 ? L : len;
        f.arcs.push_back({arr.vertex_s[from], span});
        arc_interior_points(domain, arr.vertex_s[from], span, corners, f.outline);
        if (domain.kind() == DomainKind::Disc) {
          const double theta = span / domain.radius();
          arc_area += 0.5 * domain.radius() * domain.radius() * (theta - std::sin(theta));
        }
      } else {
        const ArrangementChord& c = arr.chords[e.id];
        const Vec2 a = e.forward ? c.a : c.b;
        const Vec2 b = e.forward ? c.b : c.a;
        f.chords.push_back({e.id, a, b});
        (e.forward ? arr.chords[e.id].left_face : arr.chords[e.id].right_face) = arr.faces.size();
      }
      e = next(e);
      if (e.arc == start.arc && e.id == start.id && e.forward == start.forward) break;
      if (!mark(e) || ++guard > 4 * (V + C) + 4) {
        throw Error(ErrorCode::NumericFailure, "arrangement face traversal did not close");
      }
    }
    f.area = shoelace(corners) + arc_area;
    f.enclosed = f.arcs.empty();
    f.box = outline_box(f.outline, margin);
    arr.faces.push_back(std::move(f));
  }
  return arr;
}

std::size_t PlanarSolution::locate(Vec2 p, double tol) const {
  const ConvexDomain& domain = *arr_.domain;
  if (tol < 0.0) tol = 1e-9 * domain.scale();
  if (domain.signed_distance(p) > tol) throw Error(ErrorCode::OutsideDomain, "point lies outside the domain");
  for (std::size_t k = 0; k < arr_.faces.size(); ++k) {
    const Face& f = arr_.faces[k];
    if (p.x < f.box.min.x || p.y < f.box.min.y || p.x > f.box.max.x || p.y > f.box.max.y) continue;
    bool inside = true;
    bool on_chord = false;
    for (const FaceChord& c : f.chords) {
      const Vec2 d = c.to - c.from;
      const double len = norm(d);
      const double side = cross(d, p - c.from) / len;
      if (side < -tol) {
        inside = false;
        break;
      }
      if (side <= tol) {
        const double along = dot(d, p - c.from) / len;
        if (along >= -tol && along <= len + tol) on_chord = true;
      }
    }
    if (!inside) continue;
    if (on_chord) throw Error(ErrorCode::OnJumpSet, "point lies on a transport segment");
    return k;
  }
  throw Error(ErrorCode::OutsideDomain, "point is not covered by any face");
}

double PlanarSolution::jump(std::size_t k) const {
  const ArrangementChord& c = arr_.chords[k];
  return std::abs(arr_.faces[c.left_face].value - arr_.faces[c.right_face].value);
}

}  // namespace lgp
