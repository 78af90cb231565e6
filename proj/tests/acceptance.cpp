// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lgp/duality.hpp"
#include "lgp/fields.hpp"
#include "lgp/harness.hpp"
#include "random_suite.hpp"

using namespace lgp;

namespace {

constexpr double kPi = std::numbers::pi;
const double kA = std::sqrt(2.0) / 2.0;
constexpr std::uint64_t kSuiteSeed = 20240611;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int failures = 0;

void verdict(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %2d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ConvexDomain unit_disc() { return ConvexDomain::disc({0.0, 0.0}, 1.0); }
ConvexDomain square() { return ConvexDomain::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

// Value of u off the jump set: points on a chord are moved by a hair.
double value_off_jumps(const PlanarSolution& sol, Vec2 p) {
  const Vec2 offsets[] = {{0, 0}, {1e-9, 0}, {0, 1e-9}, {-1e-9, 0}, {0, -1e-9}};
  for (Vec2 o : offsets) {
    try {
      return evaluate_u(sol, p + o);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OnJumpSet) throw;
    }
  }
  return std::nan("");
}

// Shared across criteria: every plan the run produces, for the crossing check.
struct CrossingTally {
  std::size_t plans = 0;
  std::size_t crossings = 0;
  void add(const TransportPlan& plan, const BoundaryMeasurePair& mu) {
    ++plans;
    crossings += plan_diagnostics(plan, mu).crossing_count;
  }
};
CrossingTally tally;

void brothers_continuous() {
  Timer t;
  const ConvexDomain d = unit_disc();
  const LeastGradientResult r = solve_least_gradient(d, brothers_g1(4096), 180);
  tally.add(r.plan, *r.measure);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double sum = 0.0;
  std::size_t count = 0;
  while (count < 10000) {
    const Vec2 p{unit(rng), unit(rng)};
    if (norm(p) >= 1.0) continue;
    if (std::abs(std::abs(p.x) - kA) < 0.02 || std::abs(std::abs(p.y) - kA) < 0.02) continue;
    const double ref = std::get<double>(brothers_reference(BrothersQuantity::U1, p));
    sum += std::abs(value_off_jumps(r.solution, p) - ref);
    ++count;
  }
  const double mean = sum / static_cast<double>(count);
  const double secs = t.seconds();
  verdict(1, mean <= 0.03 && secs <= 60.0, "cos 2θ continuous oracle",
          fmt("mean |u - u1| = %.5f over %zu points (<= 0.03); %.2f s (<= 60 s)", mean, count, secs));
}

void duality_certificate(const std::vector<testing::SuiteInstance>& suite) {
  Timer t;
  double worst_gap = 0.0, worst_sat = 0.0;
  bool ok = true;
  for (const auto& inst : suite) {
    const TransportPlan plan = solve_kantorovich(inst.measure, CostNorm::euclidean());
    tally.add(plan, inst.measure);
    const Potential phi = dual_potentials(plan, inst.measure, CostNorm::euclidean());
    const double gap = duality_report(plan, phi, inst.measure) / std::max(1.0, plan.cost);
    const double sat = saturation_residual(plan, phi, inst.measure, CostNorm::euclidean());
    worst_gap = std::max(worst_gap, gap);
    worst_sat = std::max(worst_sat, sat);
    ok &= gap <= 1e-9 && sat <= 1e-9;
  }
  const double secs = t.seconds();
  verdict(2, ok && secs <= 10.0, "duality certificate",
          fmt("%zu instances: max gap/max(1,cost) = %.2e, max saturation = %.2e (<= 1e-9); %.2f s (<= 10 s)",
              suite.size(), worst_gap, worst_sat, secs));
}

void oracle_equivalence() {
  Timer t;
  const auto cases = testing::random_small_measures(200, 6, kSuiteSeed + 3);
  double worst = 0.0;
  for (const auto& [domain, mu] : cases) {
    const TransportPlan plan = solve_kantorovich(mu, CostNorm::euclidean());
    tally.add(plan, mu);
    worst = std::max(worst, std::abs(plan.cost - brute_force_oracle(mu, CostNorm::euclidean()).cost));
  }
  const double secs = t.seconds();
  verdict(3, worst <= 1e-9 && secs <= 30.0, "oracle equivalence",
          fmt("%zu instances <= 6x6: max |simplex - oracle| = %.2e (<= 1e-9); %.2f s (<= 30 s)", cases.size(), worst,
              secs));
}

void sharp_tv(const std::vector<testing::SuiteInstance>& suite) {
  BoundaryPiece top{0.0, kPi, PieceKind::Constant, 1.0, {}};
  BoundaryPiece bottom{kPi, 2 * kPi, PieceKind::Constant, 0.0, {}};
  const BoundaryBV chi(2 * kPi, {top, bottom});
  const LeastGradientResult sharp = solve_least_gradient(unit_disc(), chi, 8);
  const double tv = total_variation_solution(sharp.solution);
  const double bound = 0.5 * unit_disc().diameter() * total_variation_boundary(chi);
  const bool sharp_ok = std::abs(tv - 2.0) <= 1e-12 && std::abs(bound - 2.0) <= 1e-12;

  std::size_t reconstructed = 0, flat = 0;
  double worst_excess = -1e300;
  bool suite_ok = true;
  for (const auto& inst : suite) {
    const double limit = 0.5 * inst.domain.diameter() * total_variation_boundary(inst.datum);
    double value = 0.0;
    try {
      const LeastGradientResult r = solve_least_gradient(inst.domain, inst.datum, 2);
      tally.add(r.plan, *r.measure);
      value = total_variation_solution(r.solution);
      ++reconstructed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryMass) throw;
      // No planar solution exists; the bound is checked on the plan cost.
      const TransportPlan plan = central_optimal_plan(inst.measure, CostNorm::euclidean());
      tally.add(plan, inst.measure);
      value = plan.cost;
      ++flat;
    }
    worst_excess = std::max(worst_excess, value - limit);
    suite_ok &= value <= limit + 1e-9;
  }
  verdict(4, sharp_ok && suite_ok, "sharp TV constant",
          fmt("sharp TV = %.15f, (diam/2)|Dg| = %.15f; suite max TV - bound = %.3e (%zu reconstructed, %zu with "
              "boundary mass checked on plan cost)",
              tv, bound, worst_excess, reconstructed, flat));
}

void mass_identity(const std::vector<testing::SuiteInstance>& suite) {
  double worst = 0.0;
  for (const auto& inst : suite) {
    const TransportPlan plan = central_optimal_plan(inst.measure, CostNorm::euclidean());
    for (std::size_t n : {64, 128}) {
      const DensityGrid g = rasterize_density(plan, GridSpec::covering(inst.domain, n), &inst.domain);
      worst = std::max(worst, std::abs(g.total_sigma() + g.boundary_mass - plan.cost) / std::max(1e-300, plan.cost));
    }
  }
  verdict(5, worst <= 1e-9, "mass identity",
          fmt("%zu instances at grids 64 and 128: max relative |sigma + boundary - cost| = %.2e (<= 1e-9)",
              suite.size(), worst));
}

void sbv_brothers() {
  Timer t;
  const ConvexDomain d = unit_disc();
  const BoundaryMeasurePair mu = discretize(d, tangential_derivative(brothers_g2(1024)), 360);
  const TransportPlan plan = central_optimal_plan(mu, CostNorm::euclidean());
  tally.add(plan, mu);
  const SbvSplit split = sbv_split(plan);
  const double target = 4.0 * std::sqrt(2.0);
  const double rel = std::abs(split.jump_to_jump().cost - target) / target;
  const bool empty = split.jump_to_diffuse().pairs.empty() && split.diffuse_to_jump().pairs.empty();
  const double sum_err = std::abs(split.total_cost() - plan.cost);
  verdict(6, rel <= 0.01 && empty && sum_err <= 1e-12 * plan.cost, "SBV split of g2",
          fmt("jump cost %.6f vs 4*sqrt2 (rel %.2e <= 1e-2); cross fragments %zu + %zu; |sum - cost| = %.1e; %.2f s",
              split.jump_to_jump().cost, rel, split.jump_to_diffuse().pairs.size(),
              split.diffuse_to_jump().pairs.size(), sum_err, t.seconds()));
}

void variation_identity(const std::vector<testing::SuiteInstance>& suite) {
  const std::vector<double> eps{0.2, 0.1, 0.05};
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& inst : suite) {
    const double tv = total_variation_boundary(inst.datum);
    for (double e : eps) {
      const ConvexDomain outer = inst.domain.scaled(1.0 + e);
      const BoundaryBV moved = inst.datum.reparametrized(1.0 + e);
      worst = std::max(worst, std::abs(moved.length() - outer.boundary_length()) / outer.boundary_length());
      worst = std::max(worst, std::abs(total_variation_boundary(moved) - tv) / std::max(1.0, tv));
      ++checks;
    }
  }
  // The harness path on the disc, including the pushed-forward atoms.
  const StabilityReport r = run_domain_approx(unit_disc(), brothers_g1(1024), eps, 32, CostNorm::euclidean(), 64);
  for (const StabilityRecord& rec : r.records) {
    worst = std::max(worst, rec.variation_identity_error / std::max(1.0, rec.datum_variation));
    ++checks;
  }
  verdict(7, worst <= 1e-12, "variation identity",
          fmt("%zu (datum, eps) checks: max relative | |Dg_n| - |Dg| | = %.2e (<= 1e-12)", checks, worst));
}

void stability_trends() {
  Timer t;
  const ConvexDomain d = unit_disc();
  const BoundaryBV g = brothers_g1(4096);
  const StabilityReport data = run_data_stability(d, g, {8, 16, 32, 64});
  const auto& rec = data.records;
  bool strict = true;
  for (std::size_t k = 1; k < rec.size(); ++k) strict &= rec[k].l1_distance < rec[k - 1].l1_distance;
  // The finest level is the reference, so the last informative gap is the
  // second finest.
  const double final_gap = rec[rec.size() - 2].tv_gap / data.reference_tv;
  bool gaps_shrink = true;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) gaps_shrink &= rec[k].tv_gap <= rec[k - 1].tv_gap * (1.0 + data.slack);

  const StabilityReport dom = run_domain_approx(d, g, {0.2, 0.1, 0.05}, 64);
  bool dom_dec = true;
  for (std::size_t k = 1; k < dom.records.size(); ++k) {
    dom_dec &= dom.records[k].l1_distance < dom.records[k - 1].l1_distance;
  }
  std::string l1s, gaps, dl1;
  for (const auto& r : rec) {
    l1s += fmt(" %.4g", r.l1_distance);
    gaps += fmt(" %.4g", r.tv_gap);
  }
  for (const auto& r : dom.records) dl1 += fmt(" %.4g", r.l1_distance);
  verdict(8, strict && gaps_shrink && final_gap <= 0.02 && dom_dec, "stability trends",
          fmt("data L1:%s; TV gaps:%s (gap at n=32 is %.2f%% of TV_ref, <= 2%%); domain L1:%s; %.2f s", l1s.c_str(),
              gaps.c_str(), 100.0 * final_gap, dl1.c_str(), t.seconds()));
}

void monotone_dichotomy() {
  const ConvexDomain sq = square();
  const BoundaryBV top(8.0, {{0.0, 2.0, PieceKind::Constant, 0.0, {}},
                             {2.0, 4.0, PieceKind::Constant, 1.0, {}},
                             {4.0, 8.0, PieceKind::Constant, 0.0, {}}});
  const MonotoneVerdict bad = check_monotone_polygon(sq, top, 8);
  std::vector<BoundaryPiece> pieces;
  for (std::size_t e = 0; e < 4; ++e) {
    BoundaryPiece p{2.0 * e, 2.0 * (e + 1), PieceKind::Samples, 0.0, {}};
    for (int k = 0; k <= 64; ++k) p.samples.push_back(sq.at(2.0 * e + 2.0 * k / 64.0).xy.x);
    pieces.push_back(p);
  }
  const MonotoneVerdict good = check_monotone_polygon(sq, BoundaryBV(8.0, pieces), 32);
  const bool ok = std::abs(bad.boundary_mass - 2.0) <= 1e-12 && !bad.solution_exists && good.monotone &&
                  good.boundary_mass == 0.0 && good.solution_exists && good.solution.has_value();
  verdict(9, ok, "monotone polygon dichotomy",
          fmt("top edge: mass %.3f, exists %d (\"%s\"); g = x: monotone %d, mass %.1e, reconstructed %d",
              bad.boundary_mass, bad.solution_exists, bad.message.c_str(), good.monotone, good.boundary_mass,
              good.solution.has_value()));
}

void right_angles() {
  const ConvexDomain d = unit_disc();
  const BoundaryMeasurePair mu = discretize(d, tangential_derivative(brothers_g1(4096)), 180);
  const TransportPlan plan = central_optimal_plan(mu, CostNorm::euclidean());
  const Potential phi = dual_potentials(plan, mu, CostNorm::euclidean());
  const GridSpec grid = GridSpec::covering(d, 256);
  const DualField field = dual_field_z(extend_potential(phi, CostNorm::euclidean()), d, grid);

  std::size_t cells = 0, rotated_ok = 0, literal_ok = 0;
  for (const PlanPair& p : plan.pairs) {
    const Vec2 a = p.source.xy, b = p.target.xy;
    const double len = distance(a, b);
    if (len < 4.0 * grid.h) continue;
    const Vec2 dir = (b - a) / len;
    std::set<std::size_t> seen;
    for (double s = 2.0 * grid.h; s <= len - 2.0 * grid.h; s += 0.25 * grid.h) {
      const Vec2 q = a + s * dir;
      const auto i = static_cast<std::size_t>((q.x - grid.origin.x) / grid.h);
      const auto j = static_cast<std::size_t>((q.y - grid.origin.y) / grid.h);
      const std::size_t k = j * grid.nx + i;
      if (!field.active[k] || !seen.insert(k).second) continue;
      const Vec2 z = normalized(field.z[k]);
      ++cells;
      rotated_ok += std::abs(dot(z, rotate_quarter(dir))) >= 0.95;
      literal_ok += std::abs(dot(z, dir)) >= 0.95;
    }
  }
  const double rotated = static_cast<double>(rotated_ok) / static_cast<double>(cells);
  const double literal = static_cast<double>(literal_ok) / static_cast<double>(cells);
  tally.add(plan, mu);
  verdict(10, tally.crossings == 0 && rotated >= 0.90, "non-crossing and right angles",
          fmt("%zu crossings over %zu plans; %zu chord cells: %.1f%% with |z.R(chord)| >= 0.95 (>= 90%%), "
              "%.1f%% with |z.chord| >= 0.95",
              tally.crossings, tally.plans, cells, 100.0 * rotated, 100.0 * literal));
}

}  // namespace

int main() {
  const auto suite = testing::random_suite(200, 40, kSuiteSeed);
  const std::vector<std::function<void()>> criteria{
      [] { brothers_continuous(); },
      [&] { duality_certificate(suite); },
      [] { oracle_equivalence(); },
      [&] { sharp_tv(suite); },
      [&] { mass_identity(suite); },
      [] { sbv_brothers(); },
      [&] { variation_identity(suite); },
      [] { stability_trends(); },
      [] { monotone_dichotomy(); },
      [] { right_angles(); },
  };
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    try {
      criteria[k]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(k + 1), false, "criterion raised", e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
