#include "lgp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "lgp/grid.hpp"

namespace lgp::svg {

namespace {

constexpr double kCanvas = 512.0;

// Maps the domain's bounding box onto a square canvas with y pointing up.
struct Frame {
  Box box;
  double scale;

  explicit Frame(const ConvexDomain& d) : box(d.bounding_box()) {
    const double span = std::max(box.max.x - box.min.x, box.max.y - box.min.y);
    scale = 0.9 * kCanvas / span;
  }
  double x(double v) const { return 0.05 * kCanvas + (v - box.min.x) * scale; }
  double y(double v) const { return 0.95 * kCanvas - (v - box.min.y) * scale; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Blue (low) to white to red (high).
std::string color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  double r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = 0.2 + 0.8 * s;
    g = 0.3 + 0.7 * s;
    b = 1.0;
  } else {
    const double s = (t - 0.5) / 0.5;
    r = 1.0;
    g = 1.0 - 0.75 * s;
    b = 1.0 - 0.8 * s;
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 255), static_cast<int>(g * 255),
                static_cast<int>(b * 255));
  return buf;
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
      << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) out << "<title>" << title << "</title>\n";
}

void domain_outline(std::ostringstream& out, const ConvexDomain& d, const Frame& f) {
  if (d.kind() == DomainKind::Disc) {
    out << "<circle cx=\"" << num(f.x(d.center().x)) << "\" cy=\"" << num(f.y(d.center().y)) << "\" r=\""
        << num(d.radius() * f.scale) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    return;
  }
  out << "<polygon points=\"";
  for (Vec2 v : d.vertices()) out << num(f.x(v.x)) << ',' << num(f.y(v.y)) << ' ';
  out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
}

}  // namespace

std::string solution_svg(const PlanarSolution& sol) {
  const ConvexDomain& d = *sol.arrangement().domain;
  const Frame f(d);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Face& face : sol.faces()) {
    lo = std::min(lo, face.value);
    hi = std::max(hi, face.value);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  double max_mass = 0.0;
  for (const ArrangementChord& c : sol.chords()) max_mass = std::max(max_mass, c.mass);
  std::ostringstream out;
  open_svg(out, "least gradient solution");
  for (const Face& face : sol.faces()) {
    out << "<polygon points=\"";
    for (Vec2 p : face.outline) out << num(f.x(p.x)) << ',' << num(f.y(p.y)) << ' ';
    out << "\" fill=\"" << color((face.value - lo) / span) << "\" stroke=\"none\"/>\n";
  }
  for (const ArrangementChord& c : sol.chords()) {
    const double w = max_mass > 0.0 ? 0.3 + 2.2 * c.mass / max_mass : 1.0;
    out << "<line x1=\"" << num(f.x(c.a.x)) << "\" y1=\"" << num(f.y(c.a.y)) << "\" x2=\"" << num(f.x(c.b.x))
        << "\" y2=\"" << num(f.y(c.b.y)) << "\" stroke=\"black\" stroke-width=\"" << num(w) << "\"/>\n";
  }
  domain_outline(out, d, f);
  out << "</svg>\n";
  return out.str();
}

std::string contour_svg(const ConvexDomain& domain, const std::function<double(Vec2)>& fn,
                        const std::vector<double>& levels, std::size_t n, const std::string& title) {
  const Frame f(domain);
  const GridSpec grid = GridSpec::covering(domain, n);
  std::vector<double> v((n + 1) * (n + 1));
  std::vector<char> in((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const Vec2 p = grid.vertex(i, j);
      in[j * (n + 1) + i] = domain.contains(p) ? 1 : 0;
      v[j * (n + 1) + i] = in[j * (n + 1) + i] ? fn(p) : 0.0;
    }
  }
  std::ostringstream out;
  open_svg(out, title);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const double level = levels[l];
    const std::string stroke = color(levels.size() > 1 ? static_cast<double>(l) / static_cast<double>(levels.size() - 1) : 0.5);
    out << "<path fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.2\" d=\"";
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k[4] = {j * (n + 1) + i, j * (n + 1) + i + 1, (j + 1) * (n + 1) + i + 1,
                                  (j + 1) * (n + 1) + i};
        if (!in[k[0]] || !in[k[1]] || !in[k[2]] || !in[k[3]]) continue;
        const Vec2 corner[4] = {grid.vertex(i, j), grid.vertex(i + 1, j), grid.vertex(i + 1, j + 1),
                                grid.vertex(i, j + 1)};
        // Crossing points on the four cell edges, joined pairwise in order.
        std::vector<Vec2> hits;
        for (int e = 0; e < 4; ++e) {
          const double a = v[k[e]] - level;
          const double b = v[k[(e + 1) % 4]] - level;
          if ((a < 0.0) != (b < 0.0)) {
            const double t = a / (a - b);
            hits.push_back(corner[e] + t * (corner[(e + 1) % 4] - corner[e]));
          }
        }
        for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
          out << 'M' << num(f.x(hits[h].x)) << ' ' << num(f.y(hits[h].y)) << 'L' << num(f.x(hits[h + 1].x)) << ' '
              << num(f.y(hits[h + 1].y));
        }
      }
    }
    out << "\"/>\n";
  }
  domain_outline(out, domain, f);
  out << "</svg>\n";
  return out.str();
}

std::string heatmap_svg(const ConvexDomain& domain, const std::function<double(Vec2)>& fn, std::size_t n,
                        const std::string& title, const std::vector<std::pair<Vec2, Vec2>>& overlay) {
  const Frame f(domain);
  const GridSpec grid = GridSpec::covering(domain, n);
  std::vector<double> vals(grid.cell_count(), std::numeric_limits<double>::quiet_NaN());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 c = grid.cell_center(i, j);
      if (!domain.contains(c)) continue;
      const double v = fn(c);
      vals[j * n + i] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream out;
  open_svg(out, title);
  const double side = grid.h * f.scale;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = vals[j * n + i];
      if (std::isnan(v)) continue;
      const Vec2 corner = grid.vertex(i, j + 1);
      out << "<rect x=\"" << num(f.x(corner.x)) << "\" y=\"" << num(f.y(corner.y)) << "\" width=\"" << num(side)
          << "\" height=\"" << num(side) << "\" fill=\"" << color((v - lo) / span) << "\"/>\n";
    }
  }
  for (const auto& [a, b] : overlay) {
    out << "<line x1=\"" << num(f.x(a.x)) << "\" y1=\"" << num(f.y(a.y)) << "\" x2=\"" << num(f.x(b.x)) << "\" y2=\""
        << num(f.y(b.y)) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  domain_outline(out, domain, f);
  out << "</svg>\n";
  return out.str();
}

}  // namespace lgp::svg
