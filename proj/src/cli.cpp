#include "lgp/cli.hpp"

#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "lgp/io.hpp"
#include "lgp/svg.hpp"

namespace lgp {

namespace {

namespace fs = std::filesystem;
using io::json;

struct RunConfig {
  std::optional<ConvexDomain> domain;
  std::optional<BoundaryBV> datum;
  std::size_t n_diffuse = 64;
  std::size_t grid = 128;
  CostNorm cost = CostNorm::euclidean();
  std::vector<std::size_t> schedule{8, 16, 32, 64};
  std::vector<double> eps_schedule{0.2, 0.1, 0.05};
  double p = 2.0;
  std::vector<ExclusionDisc> exclude;
};

struct Flags {
  std::string config;
  std::string out = "out";
  std::optional<std::size_t> grid;
  std::optional<std::size_t> diffuse;
  std::optional<unsigned long> seed;
};

RunConfig load_config(const Flags& flags) {
  if (flags.config.empty()) throw Error(ErrorCode::Config, "--config is required for this command");
  const json j = io::read_json_file(flags.config);
  RunConfig cfg;
  try {
    if (!j.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
    cfg.domain = io::parse_domain(j.at("domain"));
    if (j.contains("datum")) {
      cfg.datum = io::parse_datum(j.at("datum"), *cfg.domain);
    } else if (j.contains("preset")) {
      cfg.datum = io::parse_datum(json{{"preset", j.at("preset")}}, *cfg.domain);
    } else {
      throw Error(ErrorCode::Config, "config needs a \"datum\" or a \"preset\"");
    }
    const long n_diffuse = j.value("n_diffuse", 64L);
    const long grid = j.value("grid", 128L);
    if (n_diffuse < 1) throw Error(ErrorCode::Config, "n_diffuse must be at least 1");
    if (grid < 16) throw Error(ErrorCode::Config, "grid must be at least 16");
    cfg.n_diffuse = static_cast<std::size_t>(n_diffuse);
    cfg.grid = static_cast<std::size_t>(grid);
    cfg.cost = io::parse_cost(j.contains("cost") ? j.at("cost") : json());
    if (j.contains("schedule")) cfg.schedule = j.at("schedule").get<std::vector<std::size_t>>();
    if (j.contains("eps_schedule")) cfg.eps_schedule = j.at("eps_schedule").get<std::vector<double>>();
    cfg.p = j.value("p", 2.0);
    if (j.contains("exclude")) {
      for (const json& e : j.at("exclude")) {
        const auto c = e.at("center").get<std::vector<double>>();
        if (c.size() != 2) throw Error(ErrorCode::Config, "exclusion centre must be [x, y]");
        cfg.exclude.push_back({{c[0], c[1]}, e.at("radius").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("bad config: ") + e.what());
  } catch (const Error& e) {
    // Invalid geometry or data in a config file is an input problem.
    if (e.code() == ErrorCode::InvalidDomain || e.code() == ErrorCode::InvalidDatum ||
        e.code() == ErrorCode::InvalidNorm) {
      throw Error(ErrorCode::Config, e.what());
    }
    throw;
  }
  if (flags.grid) {
    if (*flags.grid < 16) throw Error(ErrorCode::Config, "--grid must be at least 16");
    cfg.grid = *flags.grid;
  }
  if (flags.diffuse) {
    if (*flags.diffuse < 1) throw Error(ErrorCode::Config, "--diffuse must be at least 1");
    cfg.n_diffuse = *flags.diffuse;
  }
  return cfg;
}

void write_json(const fs::path& path, const json& j) { io::write_text_file(path, j.dump(2) + "\n"); }

int cmd_solve(const Flags& flags) {
  const RunConfig cfg = load_config(flags);
  const LeastGradientResult res = solve_least_gradient(*cfg.domain, *cfg.datum, cfg.n_diffuse, cfg.cost);
  const fs::path out = flags.out;
  const double tv = total_variation_solution(res.solution);
  std::size_t enclosed = 0;
  for (const Face& f : res.solution.faces()) enclosed += f.enclosed ? 1 : 0;
  write_json(out / "plan.json", io::plan_to_json(res.plan));
  write_json(out / "solution.json", io::solution_to_json(res.solution));
  io::write_text_file(out / "solution.svg", svg::solution_svg(res.solution));
  write_json(out / "report.json", {{"cost", res.plan.cost},
                                   {"total_variation", tv},
                                   {"boundary_variation", res.boundary_variation},
                                   {"tv_bound", 0.5 * cfg.domain->diameter() * res.boundary_variation},
                                   {"faces", res.solution.faces().size()},
                                   {"enclosed_faces", enclosed},
                                   {"chords", res.solution.chords().size()}});
  std::cout << "cost " << res.plan.cost << "  total variation " << tv << "  faces " << res.solution.faces().size()
            << '\n';
  return 0;
}

int cmd_dual(const Flags& flags) {
  const RunConfig cfg = load_config(flags);
  const LeastGradientResult res = solve_least_gradient(*cfg.domain, *cfg.datum, cfg.n_diffuse, cfg.cost);
  Potential phi;
  double gap = 0.0, saturation = 0.0, lipschitz = 0.0;
  if (res.measure) {
    phi = dual_potentials(res.plan, *res.measure, cfg.cost);
    gap = duality_report(res.plan, phi, *res.measure);
    saturation = saturation_residual(res.plan, phi, *res.measure, cfg.cost);
    lipschitz = lipschitz_violation(phi, cfg.cost);
  }
  const ExtendedPotential ext = extend_potential(phi, cfg.cost);
  const GridSpec grid = GridSpec::covering(*cfg.domain, cfg.grid);
  const DualField field = dual_field_z(ext, *cfg.domain, grid);
  std::vector<double> values(grid.cell_count(), 0.0);
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      if (field.active[j * grid.nx + i]) values[j * grid.nx + i] = ext(grid.cell_center(i, j));
    }
  }
  const fs::path out = flags.out;
  write_json(out / "potential.json", io::potential_to_json(phi));
  io::write_text_file(out / "z.csv", io::field_csv(field));
  io::write_text_file(out / "phi.csv", io::scalar_csv(grid, values, field.active));
  write_json(out / "dual.json", {{"cost", res.plan.cost},
                                 {"gap", gap},
                                 {"saturation_residual", saturation},
                                 {"lipschitz_violation", lipschitz},
                                 {"max_norm_z", field.max_norm},
                                 {"flagged_cells", field.flagged_count},
                                 {"max_divergence", field.max_divergence},
                                 {"mean_divergence", field.mean_divergence}});
  std::cout << "duality gap " << gap << "  max |z| " << field.max_norm << '\n';
  return 0;
}

json fragments_json(const SbvSplit& split, bool with_segments) {
  static const char* names[4] = {"g1", "g2", "g3", "g4"};
  json out = json::object();
  for (std::size_t k = 0; k < 4; ++k) {
    json f = {{"cost", split.fragments[k].cost}, {"pairs", split.fragments[k].pairs.size()}};
    if (with_segments && k == 0) {
      json segs = json::array();
      for (const PlanPair& p : split.fragments[k].pairs) {
        segs.push_back({{"src", {p.source.xy.x, p.source.xy.y}}, {"dst", {p.target.xy.x, p.target.xy.y}}, {"mass", p.mass}});
      }
      f["segments"] = segs;
    }
    out[names[k]] = f;
  }
  return out;
}

int cmd_density(const Flags& flags) {
  const RunConfig cfg = load_config(flags);
  TransportPlan plan;
  const double dg = total_variation_boundary(*cfg.datum);
  if (dg > 0.0) {
    const BoundaryMeasurePair mu = discretize(*cfg.domain, tangential_derivative(*cfg.datum), cfg.n_diffuse);
    plan = central_optimal_plan(mu, cfg.cost);
  }
  const GridSpec grid = GridSpec::covering(*cfg.domain, cfg.grid);
  const DensityGrid density = rasterize_density(plan, grid, &*cfg.domain);
  const DensityNorms norms = density_norms(density, cfg.p, cfg.exclude);
  const fs::path out = flags.out;
  io::write_text_file(out / "density.csv", io::density_csv(density));
  write_json(out / "density.json", {{"cost", plan.cost},
                                    {"sigma_total", density.total_sigma()},
                                    {"boundary_mass", density.boundary_mass},
                                    {"fragments", fragments_json(sbv_split(plan, cfg.cost), false)},
                                    {"norms", {{"p", cfg.p}, {"lp", norms.lp}, {"linf", norms.linf}}}});
  std::cout << "sigma total " << density.total_sigma() << "  boundary mass " << density.boundary_mass << '\n';
  return 0;
}

int cmd_sbv(const Flags& flags) {
  const RunConfig cfg = load_config(flags);
  TransportPlan plan;
  if (total_variation_boundary(*cfg.datum) > 0.0) {
    const BoundaryMeasurePair mu = discretize(*cfg.domain, tangential_derivative(*cfg.datum), cfg.n_diffuse);
    plan = central_optimal_plan(mu, cfg.cost);
  }
  const SbvSplit split = sbv_split(plan, cfg.cost);
  write_json(fs::path(flags.out) / "sbv.json",
             {{"cost", plan.cost}, {"fragment_total", split.total_cost()}, {"fragments", fragments_json(split, true)}});
  std::cout << "jump-to-jump cost " << split.jump_to_jump().cost << "  total " << split.total_cost() << '\n';
  return 0;
}

int cmd_stability(const Flags& flags, bool domain_mode) {
  const RunConfig cfg = load_config(flags);
  const StabilityReport report =
      domain_mode ? run_domain_approx(*cfg.domain, *cfg.datum, cfg.eps_schedule, cfg.n_diffuse, cfg.cost, 256)
                  : run_data_stability(*cfg.domain, *cfg.datum, cfg.schedule, cfg.cost, 256);
  const fs::path out = flags.out;
  write_json(out / "stability.json", io::stability_to_json(report));
  io::write_text_file(out / "stability.csv", io::stability_csv(report));
  for (const StabilityRecord& r : report.records) {
    std::cout << "level " << r.level << "  L1 " << r.l1_distance << "  TV gap " << r.tv_gap << '\n';
  }
  return 0;
}

int cmd_check_monotone(const Flags& flags) {
  const RunConfig cfg = load_config(flags);
  if (cfg.domain->kind() != DomainKind::Polygon) throw Error(ErrorCode::Config, "check monotone needs a polygon domain");
  const MonotoneVerdict v = check_monotone_polygon(*cfg.domain, *cfg.datum, cfg.n_diffuse, cfg.cost);
  json j = {{"monotone", v.monotone},
            {"violation", v.violation},
            {"boundary_mass", v.boundary_mass},
            {"solution_exists", v.solution_exists},
            {"message", v.message}};
  if (v.violating_edge) j["violating_edge"] = *v.violating_edge;
  if (v.mass_edge) j["mass_edge"] = *v.mass_edge;
  const fs::path out = flags.out;
  write_json(out / "monotone.json", j);
  if (v.solution) io::write_text_file(out / "solution.svg", svg::solution_svg(*v.solution));
  if (!v.solution_exists) {
    std::cerr << v.message << '\n';
    return 1;
  }
  std::cout << v.message << '\n';
  return 0;
}

int cmd_demo_brothers(const Flags& flags) {
  const ConvexDomain disc = ConvexDomain::disc({0.0, 0.0}, 1.0);
  std::vector<double> levels;
  for (int k = 1; k <= 12; ++k) levels.push_back(0.1 * k);
  auto phi1 = [](Vec2 p) {
    // The closed form is continuous across the diagonals; nudge off them.
    if (std::abs(std::abs(p.x) - std::abs(p.y)) < 1e-12) p.x += 1e-9;
    return std::get<double>(brothers_reference(BrothersQuantity::Phi1, p));
  };
  const fs::path out = flags.out;
  io::write_text_file(out / "brothers_phi1.svg", svg::contour_svg(disc, phi1, levels, 256, "first potential"));
  io::write_text_file(out / "brothers_phi2.svg",
                      svg::contour_svg(disc, [](Vec2 p) { return brothers_phi2(p); }, levels, 256, "second potential"));
  const double a = std::numbers::sqrt2 / 2.0;
  const std::vector<std::pair<Vec2, Vec2>> square = {
      {{a, a}, {-a, a}}, {{-a, a}, {-a, -a}}, {{-a, -a}, {a, -a}}, {{a, -a}, {a, a}}};
  auto u_lambda = [](Vec2 p) {
    if (std::abs(p.x) > std::numbers::sqrt2 / 2.0) return 2.0 * p.x * p.x;
    if (std::abs(p.y) > std::numbers::sqrt2 / 2.0) return -2.0 * p.y * p.y;
    return 0.0;
  };
  io::write_text_file(out / "brothers_u_lambda.svg", svg::heatmap_svg(disc, u_lambda, 128, "u_lambda, lambda = 0", square));
  std::cout << "wrote brothers_phi1.svg, brothers_phi2.svg, brothers_u_lambda.svg to " << out.string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Least gradient problems in convex planar domains via boundary-to-boundary optimal transport"};
  app.fallthrough();
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--grid", flags.grid, "grid resolution (cells per side, at least 16)");
  app.add_option("--diffuse", flags.diffuse, "atoms per sign-constant arc of the diffuse part");
  app.add_option("--seed", flags.seed, "seed for randomized suites");

  auto* solve = app.add_subcommand("solve", "optimal plan, reconstructed solution and TV report");
  auto* dual = app.add_subcommand("dual", "Kantorovich potentials, rotated dual field and duality gap");
  auto* density = app.add_subcommand("density", "transport density grids, norms and boundary mass");
  auto* sbv = app.add_subcommand("sbv", "split of the plan by atom origin");
  auto* stability = app.add_subcommand("stability", "stability experiments");
  stability->require_subcommand(1);
  auto* stab_data = stability->add_subcommand("data", "refine the boundary datum");
  auto* stab_domain = stability->add_subcommand("domain", "approximate the disc from outside");
  auto* check = app.add_subcommand("check", "structural checks");
  check->require_subcommand(1);
  auto* monotone = check->add_subcommand("monotone", "edge monotonicity and boundary mass on a polygon");
  auto* demo = app.add_subcommand("demo", "reproduce reference figures");
  demo->require_subcommand(1);
  auto* brothers = demo->add_subcommand("brothers", "potentials and solution family of the cos 2θ example");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(flags);
    if (dual->parsed()) return cmd_dual(flags);
    if (density->parsed()) return cmd_density(flags);
    if (sbv->parsed()) return cmd_sbv(flags);
    if (stab_data->parsed()) return cmd_stability(flags, false);
    if (stab_domain->parsed()) return cmd_stability(flags, true);
    if (monotone->parsed()) return cmd_check_monotone(flags);
    if (brothers->parsed()) return cmd_demo_brothers(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Config ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace lgp
