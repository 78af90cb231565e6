#include "lgp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lgp::io {

namespace {

Vec2 parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Config, "points must be [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

const char* tag_name(AtomTag t) { return t == AtomTag::Atomic ? "atomic" : "diffuse"; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BoundaryPiece constant_piece(double from, double to, double v) {
  BoundaryPiece p;
  p.from = from;
  p.to = to;
  p.value = v;
  return p;
}

}  // namespace

ConvexDomain parse_domain(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "domain must be an object");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "disc") return ConvexDomain::disc(parse_point(j.at("center")), j.at("radius").get<double>());
  if (kind == "polygon") {
    std::vector<Vec2> v;
    for (const json& p : j.at("vertices")) v.push_back(parse_point(p));
    return ConvexDomain::polygon(std::move(v));
  }
  throw Error(ErrorCode::Config, "unknown domain kind '" + kind + "'");
}

json domain_to_json(const ConvexDomain& d) {
  if (d.kind() == DomainKind::Disc) return {{"kind", "disc"}, {"center", point_json(d.center())}, {"radius", d.radius()}};
  json v = json::array();
  for (Vec2 p : d.vertices()) v.push_back(point_json(p));
  return {{"kind", "polygon"}, {"vertices", v}};
}

BoundaryBV datum_from_function(const ConvexDomain& domain, double (*f)(Vec2), std::size_t intervals) {
  const double L = domain.boundary_length();
  if (domain.kind() == DomainKind::Disc) {
    return BoundaryBV::sampled(L, [&](double s) { return f(domain.at(s).xy); }, intervals);
  }
  std::vector<BoundaryPiece> pieces;
  const std::size_t n = domain.edge_count();
  for (std::size_t e = 0; e < n; ++e) {
    BoundaryPiece p;
    p.from = domain.vertex_s(e);
    p.to = e + 1 < n ? domain.vertex_s(e + 1) : L;
    p.kind = PieceKind::Samples;
    const std::size_t m = std::max<std::size_t>(1, intervals / n);
    const Vec2 a = domain.vertices()[e];
    const Vec2 b = domain.vertices()[(e + 1) % n];
    for (std::size_t k = 0; k <= m; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(m);
      p.samples.push_back(f(a + t * (b - a)));
    }
    pieces.push_back(std::move(p));
  }
  return BoundaryBV(L, std::move(pieces));
}

BoundaryBV parse_datum(const json& j, const ConvexDomain& domain) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "datum must be an object");
  const double L = domain.boundary_length();
  if (j.contains("preset")) {
    const std::string name = j.at("preset").get<std::string>();
    const std::size_t intervals = j.value("intervals", std::size_t{4096});
    if (name == "brothers_g1" || name == "cos2theta") {
      if (domain.kind() != DomainKind::Disc) throw Error(ErrorCode::Config, "preset needs the unit disc");
      return brothers_g1(intervals);
    }
    if (name == "brothers_g2") {
      if (domain.kind() != DomainKind::Disc) throw Error(ErrorCode::Config, "preset needs the unit disc");
      return brothers_g2(intervals / 4);
    }
    if (name == "x") return datum_from_function(domain, [](Vec2 p) { return p.x; }, intervals);
    if (name == "y") return datum_from_function(domain, [](Vec2 p) { return p.y; }, intervals);
    if (name == "constant") return BoundaryBV::constant(L, j.value("value", 0.0));
    if (name == "upper_indicator") {
      if (domain.kind() != DomainKind::Disc) throw Error(ErrorCode::Config, "upper_indicator needs a disc");
      return BoundaryBV(L, {constant_piece(0.0, 0.5 * L, 1.0), constant_piece(0.5 * L, L, 0.0)});
    }
    if (name == "top_edge_indicator") {
      if (domain.kind() != DomainKind::Polygon) throw Error(ErrorCode::Config, "top_edge_indicator needs a polygon");
      double top = -1e300;
      for (Vec2 v : domain.vertices()) top = std::max(top, v.y);
      const double tol = 1e-9 * domain.scale();
      std::vector<BoundaryPiece> pieces;
      const std::size_t n = domain.edge_count();
      for (std::size_t e = 0; e < n; ++e) {
        const Vec2 a = domain.vertices()[e];
        const Vec2 b = domain.vertices()[(e + 1) % n];
        const bool on_top = std::abs(a.y - top) <= tol && std::abs(b.y - top) <= tol;
        pieces.push_back(constant_piece(domain.vertex_s(e), e + 1 < n ? domain.vertex_s(e + 1) : L, on_top ? 1.0 : 0.0));
      }
      return BoundaryBV(L, std::move(pieces));
    }
    throw Error(ErrorCode::Config, "unknown datum preset '" + name + "'");
  }
  std::vector<BoundaryPiece> pieces;
  for (const json& pj : j.at("pieces")) {
    BoundaryPiece p;
    p.from = pj.at("from").get<double>();
    p.to = pj.at("to").get<double>();
    const std::string kind = pj.value("kind", std::string("const"));
    if (kind == "const") {
      p.value = pj.at("value").get<double>();
    } else if (kind == "samples") {
      p.kind = PieceKind::Samples;
      p.samples = pj.at("values").get<std::vector<double>>();
    } else {
      throw Error(ErrorCode::Config, "unknown piece kind '" + kind + "'");
    }
    pieces.push_back(std::move(p));
  }
  BoundaryBV g(L, std::move(pieces));
  if (j.contains("jumps")) {
    std::vector<BoundaryJump> listed;
    for (const json& jj : j.at("jumps")) {
      listed.push_back({jj.at("s").get<double>(), jj.at("left").get<double>(), jj.at("right").get<double>()});
    }
    g.check_jumps(listed);
  }
  return g;
}

CostNorm parse_cost(const json& j) {
  if (j.is_null()) return CostNorm::euclidean();
  if (j.is_string()) {
    if (j.get<std::string>() == "euclidean") return CostNorm::euclidean();
    throw Error(ErrorCode::Config, "unknown cost '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("lp")) return CostNorm::lp(j.at("lp").get<double>());
  throw Error(ErrorCode::Config, "cost must be \"euclidean\" or {\"lp\": p}");
}

json plan_to_json(const TransportPlan& plan) {
  json pairs = json::array();
  for (const PlanPair& p : plan.pairs) {
    pairs.push_back({{"src", point_json(p.source.xy)},
                     {"dst", point_json(p.target.xy)},
                     {"mass", p.mass},
                     {"src_tag", tag_name(p.source_tag)},
                     {"dst_tag", tag_name(p.target_tag)}});
  }
  return {{"pairs", pairs}, {"cost", plan.cost}};
}

json solution_to_json(const PlanarSolution& sol) {
  json faces = json::array();
  for (const Face& f : sol.faces()) {
    json loop = json::array();
    for (Vec2 p : f.outline) loop.push_back(point_json(p));
    json arcs = json::array();
    for (const ArcSpan& a : f.arcs) arcs.push_back({{"from", a.from}, {"length", a.length}});
    json face = {{"outline", loop}, {"value", f.value}, {"enclosed", f.enclosed}, {"area", f.area}, {"arcs", arcs}};
    if (f.enclosed) face["interval"] = json::array({f.lo, f.hi});
    faces.push_back(face);
  }
  json chords = json::array();
  for (std::size_t k = 0; k < sol.chords().size(); ++k) {
    const ArrangementChord& c = sol.chords()[k];
    chords.push_back({{"a", point_json(c.a)}, {"b", point_json(c.b)}, {"mass", c.mass}, {"jump", sol.jump(k)},
                      {"left_face", c.left_face}, {"right_face", c.right_face}});
  }
  return {{"faces", faces}, {"chords", chords}, {"total_variation", total_variation_solution(sol)}};
}

json potential_to_json(const Potential& phi) {
  json src = json::array();
  for (std::size_t i = 0; i < phi.source_points.size(); ++i) {
    src.push_back({{"at", point_json(phi.source_points[i])}, {"phi", phi.source_values[i]}});
  }
  json dst = json::array();
  for (std::size_t j = 0; j < phi.target_points.size(); ++j) {
    dst.push_back({{"at", point_json(phi.target_points[j])}, {"phi", phi.target_values[j]}});
  }
  return {{"sources", src}, {"targets", dst}};
}

json stability_to_json(const StabilityReport& report) {
  json records = json::array();
  for (const StabilityRecord& r : report.records) {
    records.push_back({{"level", r.level},
                       {"datum_variation", r.datum_variation},
                       {"plan_cost", r.plan_cost},
                       {"l1_distance", r.l1_distance},
                       {"tv", r.tv},
                       {"tv_gap", r.tv_gap},
                       {"variation_identity_error", r.variation_identity_error},
                       {"pushforward_error", r.pushforward_error},
                       {"hausdorff", r.hausdorff}});
  }
  return {{"records", records},
          {"reference_tv", report.reference_tv},
          {"verdicts",
           {{"l1_non_increasing", report.l1_non_increasing},
            {"tv_gap_non_increasing", report.tv_gap_non_increasing},
            {"l1_strictly_decreasing", report.l1_strictly_decreasing}}},
          {"tolerances", {{"slack", report.slack}, {"eval_grid", report.eval_grid}}}};
}

std::string stability_csv(const StabilityReport& report) {
  std::ostringstream out;
  out << "level,datum_variation,plan_cost,l1_distance,tv,tv_gap\n";
  for (const StabilityRecord& r : report.records) {
    out << fmt(r.level) << ',' << fmt(r.datum_variation) << ',' << fmt(r.plan_cost) << ',' << fmt(r.l1_distance)
        << ',' << fmt(r.tv) << ',' << fmt(r.tv_gap) << '\n';
  }
  return out.str();
}

std::string density_csv(const DensityGrid& grid) {
  std::ostringstream out;
  out << "x,y,sigma,px,py\n";
  const GridSpec& g = grid.grid;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t k = j * g.nx + i;
      const Vec2 c = g.cell_center(i, j);
      out << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(grid.sigma[k]) << ',' << fmt(grid.p_vec[k].x) << ','
          << fmt(grid.p_vec[k].y) << '\n';
    }
  }
  return out.str();
}

std::string field_csv(const DualField& field) {
  std::ostringstream out;
  out << "x,y,zx,zy\n";
  const GridSpec& g = field.grid;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t k = j * g.nx + i;
      if (!field.active[k]) continue;
      const Vec2 c = g.cell_center(i, j);
      out << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(field.z[k].x) << ',' << fmt(field.z[k].y) << '\n';
    }
  }
  return out.str();
}

std::string scalar_csv(const GridSpec& grid, const std::vector<double>& values, const std::vector<char>& active) {
  std::ostringstream out;
  out << "x,y,value\n";
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const std::size_t k = j * grid.nx + i;
      if (!active[k]) continue;
      const Vec2 c = grid.cell_center(i, j);
      out << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(values[k]) << '\n';
    }
  }
  return out.str();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("malformed JSON in '") + path.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Config, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace lgp::io
