#include "lgp/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lgp {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double circular_gap(double a, double b, double length) {
  const double d = std::abs(a - b);
  return std::min(d, length - d);
}

}  // namespace

double BoundaryPiece::value_at(double s) const {
  if (kind == PieceKind::Constant) return value;
  const std::size_t intervals = samples.size() - 1;
  const double step = (to - from) / static_cast<double>(intervals);
  const double t = (s - from) / step;
  if (t <= 0.0) return samples.front();
  if (t >= static_cast<double>(intervals)) return samples.back();
  const auto k = std::min(static_cast<std::size_t>(t), intervals - 1);
  const double frac = t - static_cast<double>(k);
  return samples[k] + frac * (samples[k + 1] - samples[k]);
}

double BoundaryPiece::integral(double a, double b) const {
  a = std::clamp(a, from, to);
  b = std::clamp(b, from, to);
  if (b <= a) return 0.0;
  if (kind == PieceKind::Constant) return value * (b - a);
  const std::size_t intervals = samples.size() - 1;
  const double step = (to - from) / static_cast<double>(intervals);
  double total = 0.0;
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - from) / step)));
  for (std::size_t k = std::min(first, intervals - 1); k < intervals; ++k) {
    const double lo = from + static_cast<double>(k) * step;
    const double hi = k + 1 == intervals ? to : lo + step;
    if (lo >= b) break;
    const double x0 = std::max(lo, a);
    const double x1 = std::min(hi, b);
    if (x1 <= x0) continue;
    total += 0.5 * (value_at(x0) + value_at(x1)) * (x1 - x0);
  }
  return total;
}

double BoundaryPiece::variation() const {
  if (kind == PieceKind::Constant) return 0.0;
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) v += std::abs(samples[k + 1] - samples[k]);
  return v;
}

BoundaryBV::BoundaryBV(double length, std::vector<BoundaryPiece> pieces)
    : length_(length), pieces_(std::move(pieces)) {
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw Error(ErrorCode::InvalidDatum, "boundary length must be positive");
  }
  if (pieces_.empty()) throw Error(ErrorCode::InvalidDatum, "datum needs at least one piece");
  const double tol = 1e-9 * length_;
  if (std::abs(pieces_.front().from) > tol) {
    throw Error(ErrorCode::InvalidDatum, "first piece must start at arc coordinate 0");
  }
  if (std::abs(pieces_.back().to - length_) > tol) {
    throw Error(ErrorCode::InvalidDatum, "last piece must end at the boundary length");
  }
  pieces_.front().from = 0.0;
  pieces_.back().to = length_;
  double scale = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    BoundaryPiece& p = pieces_[i];
    if (i > 0) {
      if (std::abs(p.from - pieces_[i - 1].to) > tol) {
        throw Error(ErrorCode::InvalidDatum, "pieces must be contiguous");
      }
      p.from = pieces_[i - 1].to;
    }
    if (!(p.to > p.from)) throw Error(ErrorCode::InvalidDatum, "piece has empty interval");
    if (p.kind == PieceKind::Samples && p.samples.size() < 2) {
      throw Error(ErrorCode::InvalidDatum, "sampled piece needs at least two values");
    }
    if (p.kind == PieceKind::Constant) {
      if (!std::isfinite(p.value)) throw Error(ErrorCode::InvalidDatum, "non-finite value");
      scale = std::max(scale, std::abs(p.value));
    }
    for (double v : p.samples) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidDatum, "non-finite sample");
      scale = std::max(scale, std::abs(v));
    }
  }
  const double jump_tol = 1e-12 * (1.0 + scale);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const BoundaryPiece& prev = pieces_[(i + pieces_.size() - 1) % pieces_.size()];
    const double left = prev.left_limit();
    const double right = pieces_[i].right_limit();
    if (std::abs(right - left) > jump_tol) jumps_.push_back({pieces_[i].from, left, right});
  }
}

BoundaryBV BoundaryBV::constant(double length, double c) {
  BoundaryPiece p;
  p.from = 0.0;
  p.to = length;
  p.value = c;
  return BoundaryBV(length, {p});
}

BoundaryBV BoundaryBV::sampled(double length, const std::function<double(double)>& f,
                               std::size_t intervals) {
  BoundaryPiece p;
  p.from = 0.0;
  p.to = length;
  p.kind = PieceKind::Samples;
  intervals = std::max<std::size_t>(intervals, 1);
  p.samples.resize(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    p.samples[k] = f(length * static_cast<double>(k) / static_cast<double>(intervals));
  }
  return BoundaryBV(length, {p});
}

std::size_t BoundaryBV::piece_index(double s) const {
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s,
                                   [](double v, const BoundaryPiece& p) { return v < p.from; });
  const auto idx = static_cast<std::size_t>(it - pieces_.begin());
  return idx == 0 ? 0 : idx - 1;
}

double BoundaryBV::value(double s) const {
  s = wrap_arc(s, length_);
  const double tol = 1e-12 * length_;
  for (const BoundaryJump& j : jumps_) {
    if (circular_gap(j.s, s, length_) <= tol) return 0.5 * (j.left + j.right);
  }
  return pieces_[piece_index(s)].value_at(s);
}

double BoundaryBV::left_limit(double s) const {
  s = wrap_arc(s, length_);
  const double tol = 1e-12 * length_;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (circular_gap(pieces_[i].from, s, length_) <= tol) {
      return pieces_[(i + pieces_.size() - 1) % pieces_.size()].left_limit();
    }
  }
  return pieces_[piece_index(s)].value_at(s);
}

double BoundaryBV::right_limit(double s) const {
  s = wrap_arc(s, length_);
  const double tol = 1e-12 * length_;
  for (const BoundaryPiece& p : pieces_) {
    if (circular_gap(p.from, s, length_) <= tol) return p.right_limit();
  }
  return pieces_[piece_index(s)].value_at(s);
}

double BoundaryBV::integral_from_zero(double s) const {
  double total = 0.0;
  for (const BoundaryPiece& p : pieces_) {
    if (p.from >= s) break;
    total += p.integral(p.from, std::min(p.to, s));
  }
  return total;
}

double BoundaryBV::mean_over(double a, double len) const {
  if (!(len > 0.0)) return value(a);
  if (len >= length_) return integral_from_zero(length_) / length_;
  a = wrap_arc(a, length_);
  const double b = a + len;
  double integral = 0.0;
  if (b <= length_) {
    integral = integral_from_zero(b) - integral_from_zero(a);
  } else {
    integral = (integral_from_zero(length_) - integral_from_zero(a)) +
               integral_from_zero(b - length_);
  }
  return integral / len;
}

double BoundaryBV::min_value() const {
  double m = pieces_.front().right_limit();
  for (const BoundaryPiece& p : pieces_) {
    if (p.kind == PieceKind::Constant) m = std::min(m, p.value);
    for (double v : p.samples) m = std::min(m, v);
  }
  return m;
}

double BoundaryBV::max_value() const {
  double m = pieces_.front().right_limit();
  for (const BoundaryPiece& p : pieces_) {
    if (p.kind == PieceKind::Constant) m = std::max(m, p.value);
    for (double v : p.samples) m = std::max(m, v);
  }
  return m;
}

BoundaryBV BoundaryBV::scaled(double factor) const {
  std::vector<BoundaryPiece> out = pieces_;
  for (BoundaryPiece& p : out) {
    p.value *= factor;
    for (double& v : p.samples) v *= factor;
  }
  return BoundaryBV(length_, std::move(out));
}

BoundaryBV BoundaryBV::shifted(double c) const {
  std::vector<BoundaryPiece> out = pieces_;
  for (BoundaryPiece& p : out) {
    p.value += c;
    for (double& v : p.samples) v += c;
  }
  return BoundaryBV(length_, std::move(out));
}

BoundaryBV BoundaryBV::reparametrized(double factor) const {
  std::vector<BoundaryPiece> out = pieces_;
  for (BoundaryPiece& p : out) {
    p.from *= factor;
    p.to *= factor;
  }
  return BoundaryBV(length_ * factor, std::move(out));
}

void BoundaryBV::check_jumps(const std::vector<BoundaryJump>& listed) const {
  const double tol = 1e-9 * length_;
  for (const BoundaryJump& j : listed) {
    const double s = wrap_arc(j.s, length_);
    const auto at_endpoint = std::any_of(pieces_.begin(), pieces_.end(), [&](const BoundaryPiece& p) {
      return circular_gap(p.from, s, length_) <= tol;
    });
    if (!at_endpoint) {
      throw Error(ErrorCode::InvalidDatum,
                  "jump at s=" + std::to_string(j.s) + " is not at a piece endpoint");
    }
    const double left = left_limit(s);
    const double right = right_limit(s);
    const double vtol = 1e-9 * (1.0 + std::abs(left) + std::abs(right));
    if (std::abs(left - j.left) > vtol || std::abs(right - j.right) > vtol) {
      throw Error(ErrorCode::InvalidDatum,
                  "jump at s=" + std::to_string(j.s) + " disagrees with the piece limits");
    }
  }
}

double SignedBoundaryMeasure::total_variation() const {
  double tv = 0.0;
  for (const MeasureAtom& a : atoms) tv += std::abs(a.mass);
  for (const DensityRun& r : densities) {
    const double h = r.step();
    for (double d : r.density) tv += std::abs(d) * h;
  }
  return tv;
}

double SignedBoundaryMeasure::net_mass() const {
  double net = 0.0;
  for (const MeasureAtom& a : atoms) net += a.mass;
  for (const DensityRun& r : densities) {
    const double h = r.step();
    for (double d : r.density) net += d * h;
  }
  return net;
}

SignedBoundaryMeasure tangential_derivative(const BoundaryBV& g) {
  SignedBoundaryMeasure f;
  f.length = g.length();
  for (const BoundaryJump& j : g.jumps()) f.atoms.push_back({j.s, j.height()});
  for (const BoundaryPiece& p : g.pieces()) {
    if (p.kind != PieceKind::Samples) continue;
    DensityRun run;
    run.from = p.from;
    run.to = p.to;
    const std::size_t intervals = p.samples.size() - 1;
    const double h = (p.to - p.from) / static_cast<double>(intervals);
    run.density.resize(intervals);
    bool nonzero = false;
    for (std::size_t k = 0; k < intervals; ++k) {
      run.density[k] = (p.samples[k + 1] - p.samples[k]) / h;
      nonzero = nonzero || run.density[k] != 0.0;
    }
    if (nonzero) f.densities.push_back(std::move(run));
  }
  return f;
}

void BoundaryMeasurePair::validate(double length) const {
  double pos = 0.0;
  double neg = 0.0;
  for (const Atom& a : positive) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw Error(ErrorCode::InvalidArgument, "atom masses must be positive and finite");
    }
    pos += a.mass;
  }
  for (const Atom& a : negative) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw Error(ErrorCode::InvalidArgument, "atom masses must be positive and finite");
    }
    neg += a.mass;
  }
  const double scale = std::max(pos, neg);
  if (std::abs(pos - neg) > 1e-12 * scale) {
    throw Error(ErrorCode::Unbalanced, "positive and negative masses differ by " +
                                           std::to_string(pos - neg));
  }
  // Sweep the merged arc order; opposite-signed neighbours must not coincide.
  std::vector<std::pair<double, int>> all;
  all.reserve(positive.size() + negative.size());
  for (const Atom& a : positive) all.emplace_back(a.location.s, 1);
  for (const Atom& a : negative) all.emplace_back(a.location.s, -1);
  std::sort(all.begin(), all.end());
  const double tol = 1e-12 * length;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& a = all[i];
    for (std::size_t j = i + 1; j < all.size() && all[j].first - a.first <= tol; ++j) {
      if (all[j].second != a.second) {
        throw Error(ErrorCode::InvalidArgument, "a location carries both a positive and a negative atom");
      }
    }
  }
  if (all.size() > 1 && all.front().second != all.back().second &&
      circular_gap(all.front().first, all.back().first, length) <= tol) {
    throw Error(ErrorCode::InvalidArgument, "a location carries both a positive and a negative atom");
  }
}

double BoundaryMeasurePair::max_diffuse_mass() const {
  double m = 0.0;
  for (const Atom& a : positive) {
    if (a.tag == AtomTag::Diffuse) m = std::max(m, a.mass);
  }
  for (const Atom& a : negative) {
    if (a.tag == AtomTag::Diffuse) m = std::max(m, a.mass);
  }
  return m;
}

namespace {

void sort_atoms(std::vector<Atom>& atoms) {
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.location.s != b.location.s) return a.location.s < b.location.s;
    return a.tag == AtomTag::Atomic && b.tag == AtomTag::Diffuse;
  });
}

double sum_mass(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.mass;
  return s;
}

}  // namespace

BoundaryMeasurePair make_measure_pair(const ConvexDomain& domain,
                                      const std::vector<AtomSpec>& positive,
                                      const std::vector<AtomSpec>& negative) {
  BoundaryMeasurePair mu;
  for (const AtomSpec& a : positive) mu.positive.push_back({domain.at(a.s), a.mass, a.tag});
  for (const AtomSpec& a : negative) mu.negative.push_back({domain.at(a.s), a.mass, a.tag});
  sort_atoms(mu.positive);
  sort_atoms(mu.negative);
  mu.total_mass = sum_mass(mu.positive);
  mu.validate(domain.boundary_length());
  return mu;
}

BoundaryMeasurePair discretize(const ConvexDomain& domain, const SignedBoundaryMeasure& f,
                               std::size_t n_diffuse) {
  if (n_diffuse == 0) throw Error(ErrorCode::InvalidArgument, "n_diffuse must be at least 1");
  const double total = f.total_variation();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroMeasure, "boundary measure is identically zero");
  if (std::abs(f.net_mass()) > 1e-9 * total) {
    throw Error(ErrorCode::Unbalanced, "boundary measure does not integrate to zero");
  }
  const double drop = 1e-14 * total;

  BoundaryMeasurePair mu;
  auto emit = [&](double s, double signed_mass, AtomTag tag) {
    Atom a{domain.at(s), std::abs(signed_mass), tag};
    (signed_mass > 0.0 ? mu.positive : mu.negative).push_back(a);
  };
  for (const MeasureAtom& a : f.atoms) {
    if (a.mass != 0.0) emit(a.s, a.mass, AtomTag::Atomic);
  }

  for (const DensityRun& run : f.densities) {
    const std::size_t count = run.density.size();
    const double h = run.step();
    auto node = [&](std::size_t k) {
      return k == count ? run.to : run.from + static_cast<double>(k) * h;
    };
    std::size_t k = 0;
    while (k < count) {
      const int sgn = sign_of(run.density[k]);
      if (sgn == 0) {
        ++k;
        continue;
      }
      std::size_t end = k;
      while (end < count && sign_of(run.density[end]) == sgn) ++end;
      const double a = node(k);
      const double b = node(end);
      const double width = (b - a) / static_cast<double>(n_diffuse);
      std::size_t sub = k;
      for (std::size_t c = 0; c < n_diffuse; ++c) {
        const double lo = a + static_cast<double>(c) * width;
        const double hi = c + 1 == n_diffuse ? b : a + static_cast<double>(c + 1) * width;
        double mass = 0.0;
        double moment = 0.0;
        while (sub < end) {
          const double x0 = std::max(lo, node(sub));
          const double x1 = std::min(hi, node(sub + 1));
          if (x1 > x0) {
            const double m = std::abs(run.density[sub]) * (x1 - x0);
            mass += m;
            moment += m * 0.5 * (x0 + x1);
          }
          if (node(sub + 1) > hi) break;
          ++sub;
        }
        if (mass < drop || mass == 0.0) continue;
        emit(std::clamp(moment / mass, lo, hi), sgn * mass, AtomTag::Diffuse);
      }
      k = end;
    }
  }

  if (mu.positive.empty() || mu.negative.empty()) {
    throw Error(ErrorCode::ZeroMeasure, "no atoms survive discretization");
  }
  sort_atoms(mu.positive);
  sort_atoms(mu.negative);

  const double pos = sum_mass(mu.positive);
  const double neg = sum_mass(mu.negative);
  const double excess = pos - neg;
  if (excess != 0.0) {
    std::vector<Atom>& side = excess > 0.0 ? mu.positive : mu.negative;
    auto largest = std::max_element(side.begin(), side.end(),
                                    [](const Atom& x, const Atom& y) { return x.mass < y.mass; });
    largest->mass -= std::abs(excess);
  }
  mu.total_mass = sum_mass(mu.positive);
  mu.validate(domain.boundary_length());
  return mu;
}

double total_variation_boundary(const BoundaryBV& g) {
  double tv = 0.0;
  for (const BoundaryJump& j : g.jumps()) tv += std::abs(j.height());
  for (const BoundaryPiece& p : g.pieces()) tv += p.variation();
  return tv;
}

BoundaryBV rescale_to_tv(const BoundaryBV& g, double target_tv) {
  if (!(target_tv > 0.0)) throw Error(ErrorCode::InvalidArgument, "target variation must be positive");
  const double tv = total_variation_boundary(g);
  if (!(tv > 0.0)) throw Error(ErrorCode::ZeroVariation, "datum has zero total variation");
  return g.scaled(target_tv / tv);
}

}  // namespace lgp
