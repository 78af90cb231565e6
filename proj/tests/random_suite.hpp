#pragma once

// Seeded random instances shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lgp/boundary.hpp"

namespace lgp::testing {

struct SuiteInstance {
  ConvexDomain domain;
  BoundaryBV datum;
  BoundaryMeasurePair measure;
};

inline ConvexDomain random_domain(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < 0.5) {
    return ConvexDomain::disc({unit(rng) * 2.0 - 1.0, unit(rng) * 2.0 - 1.0}, 0.5 + 1.5 * unit(rng));
  }
  // Vertices on an ellipse at well separated angles give a strictly convex polygon.
  std::uniform_int_distribution<int> count(3, 9);
  const int n = count(rng);
  std::vector<double> angles;
  const double slot = 2.0 * std::numbers::pi / n;
  const double phase = unit(rng) * slot;
  for (int k = 0; k < n; ++k) angles.push_back(phase + slot * (k + 0.15 + 0.7 * unit(rng)));
  const double ax = 0.7 + unit(rng);
  const double ay = 0.7 + unit(rng);
  const double rot = unit(rng) * std::numbers::pi;
  const Vec2 c{unit(rng) - 0.5, unit(rng) - 0.5};
  std::vector<Vec2> v;
  for (double a : angles) {
    const Vec2 e{ax * std::cos(a), ay * std::sin(a)};
    v.push_back(c + Vec2{e.x * std::cos(rot) - e.y * std::sin(rot), e.x * std::sin(rot) + e.y * std::cos(rot)});
  }
  return ConvexDomain::polygon(std::move(v));
}

/// Random datum: piecewise constant with occasional linear pieces, so that the
/// measure mixes Atomic and Diffuse atoms.
inline BoundaryBV random_datum(const ConvexDomain& domain, std::mt19937_64& rng, std::size_t max_pieces) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(2, max_pieces);
  const double L = domain.boundary_length();
  const std::size_t k = count(rng);
  std::vector<double> cuts{0.0};
  for (std::size_t i = 1; i < k; ++i) cuts.push_back(unit(rng) * L);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double a, double b) { return b - a < 1e-3 * L; }),
             cuts.end());
  std::vector<BoundaryPiece> pieces;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    BoundaryPiece p;
    p.from = cuts[i];
    p.to = i + 1 < cuts.size() ? cuts[i + 1] : L;
    if (unit(rng) < 0.25) {
      p.kind = PieceKind::Samples;
      const double a = 4.0 * unit(rng) - 2.0;
      const double b = 4.0 * unit(rng) - 2.0;
      p.samples = {a, 0.5 * (a + b), b};
    } else {
      p.value = std::round((4.0 * unit(rng) - 2.0) * 8.0) / 8.0;
    }
    pieces.push_back(std::move(p));
  }
  return BoundaryBV(L, std::move(pieces));
}

/// Instances with a nonzero measure and at most max_atoms atoms per side.
inline std::vector<SuiteInstance> random_suite(std::size_t count, std::size_t max_atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteInstance> out;
  while (out.size() < count) {
    ConvexDomain d = random_domain(rng);
    BoundaryBV g = random_datum(d, rng, 40);
    if (total_variation_boundary(g) == 0.0) continue;
    BoundaryMeasurePair mu = discretize(d, tangential_derivative(g), 2);
    if (mu.positive.size() > max_atoms || mu.negative.size() > max_atoms) continue;
    out.push_back({std::move(d), std::move(g), std::move(mu)});
  }
  return out;
}

/// Small atom sets (at most `max_side` per side) placed directly on the boundary.
inline std::vector<std::pair<ConvexDomain, BoundaryMeasurePair>> random_small_measures(std::size_t count,
                                                                                    std::size_t max_side,
                                                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::vector<std::pair<ConvexDomain, BoundaryMeasurePair>> out;
  while (out.size() < count) {
    ConvexDomain d = random_domain(rng);
    const double L = d.boundary_length();
    const std::size_t m = side(rng);
    const std::size_t n = side(rng);
    std::vector<double> s;
    for (std::size_t k = 0; k < m + n; ++k) s.push_back(unit(rng) * L);
    std::vector<AtomSpec> pos, neg;
    double sp = 0.0, sn = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      pos.push_back({s[k], 0.1 + unit(rng)});
      sp += pos.back().mass;
    }
    for (std::size_t k = 0; k < n; ++k) {
      neg.push_back({s[m + k], 0.1 + unit(rng)});
      sn += neg.back().mass;
    }
    for (AtomSpec& a : neg) a.mass *= sp / sn;
    double check = 0.0;
    for (const AtomSpec& a : neg) check += a.mass;
    neg.back().mass += sp - check;
    out.emplace_back(d, make_measure_pair(d, pos, neg));
  }
  return out;
}

}  // namespace lgp::testing
