#include <cmath>
#include <numbers>

#include "lgp/harness.hpp"

namespace lgp {

namespace {

constexpr double kHalfRoot2 = std::numbers::sqrt2 / 2.0;
constexpr double kCaseTol = 1e-12;

void check_inside(Vec2 p) {
  if (!(norm(p) < 1.0)) throw Error(ErrorCode::OutsideDomain, "point is not inside the unit disc");
}

void check_square_lines(Vec2 p) {
  if (std::abs(std::abs(p.x) - kHalfRoot2) <= kCaseTol || std::abs(std::abs(p.y) - kHalfRoot2) <= kCaseTol) {
    throw Error(ErrorCode::OnCaseBoundary, "point lies on |x| = √2/2 or |y| = √2/2");
  }
}

void check_diagonals(Vec2 p) {
  if (std::abs(std::abs(p.x) - std::abs(p.y)) <= kCaseTol) {
    throw Error(ErrorCode::OnCaseBoundary, "point lies on a diagonal |x| = |y|");
  }
}

double phi1(Vec2 p) {
  // Non-strict tests: the pieces agree on the diagonals.
  if (p.x >= std::abs(p.y)) return -p.y + kHalfRoot2;
  if (p.y >= std::abs(p.x)) return -p.x + kHalfRoot2;
  if (-p.x >= std::abs(p.y)) return p.y + kHalfRoot2;
  return p.x + kHalfRoot2;
}

BoundaryPiece sampled_piece(double from, double to, std::size_t intervals, double offset) {
  BoundaryPiece p;
  p.from = from;
  p.to = to;
  p.kind = PieceKind::Samples;
  p.samples.resize(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double s = from + (to - from) * static_cast<double>(k) / static_cast<double>(intervals);
    p.samples[k] = std::cos(2.0 * s) + offset;
  }
  return p;
}

}  // namespace

std::variant<double, Vec2> brothers_reference(BrothersQuantity which, Vec2 p, double lambda) {
  check_inside(p);
  switch (which) {
    case BrothersQuantity::U1:
      check_square_lines(p);
      if (std::abs(p.x) > kHalfRoot2) return 2.0 * p.x * p.x - 1.0;
      if (std::abs(p.y) > kHalfRoot2) return 1.0 - 2.0 * p.y * p.y;
      return 0.0;
    case BrothersQuantity::Phi1:
      check_diagonals(p);
      return phi1(p);
    case BrothersQuantity::Z1:
      check_diagonals(p);
      if (p.x > std::abs(p.y)) return Vec2{1.0, 0.0};
      if (p.y > std::abs(p.x)) return Vec2{0.0, -1.0};
      if (-p.x > std::abs(p.y)) return Vec2{-1.0, 0.0};
      return Vec2{0.0, 1.0};
    case BrothersQuantity::U2:
      check_square_lines(p);
      if (std::abs(p.x) > kHalfRoot2) return 2.0 * p.x * p.x;
      if (std::abs(p.y) > kHalfRoot2) return -2.0 * p.y * p.y;
      return lambda;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown quantity");
}

double brothers_phi2(Vec2 p) {
  if (std::abs(p.x) < kHalfRoot2 && std::abs(p.y) < kHalfRoot2) {
    return std::min(distance(p, {kHalfRoot2, kHalfRoot2}), distance(p, {-kHalfRoot2, -kHalfRoot2}));
  }
  return phi1(p);
}

BoundaryBV brothers_g1(std::size_t intervals) {
  return BoundaryBV::sampled(2.0 * std::numbers::pi, [](double s) { return std::cos(2.0 * s); }, intervals);
}

BoundaryBV brothers_g2(std::size_t intervals_per_piece) {
  const double q = std::numbers::pi / 4.0;
  const std::size_t half = std::max<std::size_t>(1, intervals_per_piece / 2);
  std::vector<BoundaryPiece> pieces;
  pieces.push_back(sampled_piece(0.0, q, half, 1.0));
  pieces.push_back(sampled_piece(q, 3.0 * q, intervals_per_piece, -1.0));
  pieces.push_back(sampled_piece(3.0 * q, 5.0 * q, intervals_per_piece, 1.0));
  pieces.push_back(sampled_piece(5.0 * q, 7.0 * q, intervals_per_piece, -1.0));
  pieces.push_back(sampled_piece(7.0 * q, 8.0 * q, half, 1.0));
  return BoundaryBV(2.0 * std::numbers::pi, std::move(pieces));
}

}  // namespace lgp
