#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgp/duality.hpp"
#include "lgp/fields.hpp"
#include "lgp/harness.hpp"
#include "lgp/reconstruct.hpp"

namespace lgp::io {

using nlohmann::json;

/// {"kind":"disc","center":[x,y],"radius":r} or {"kind":"polygon","vertices":[[x,y],...]}.
ConvexDomain parse_domain(const json& j);
json domain_to_json(const ConvexDomain& d);

/// Explicit pieces/jumps datum, or {"preset": name} with name one of
/// brothers_g1, brothers_g2, upper_indicator, top_edge_indicator, x, y, constant.
BoundaryBV parse_datum(const json& j, const ConvexDomain& domain);

/// g(s) = f(point at s), sampled per polygon edge or over the whole circle.
BoundaryBV datum_from_function(const ConvexDomain& domain, double (*f)(Vec2), std::size_t intervals);

CostNorm parse_cost(const json& j);

json plan_to_json(const TransportPlan& plan);
json solution_to_json(const PlanarSolution& sol);
json potential_to_json(const Potential& phi);
json stability_to_json(const StabilityReport& report);

std::string stability_csv(const StabilityReport& report);
/// Header x,y,sigma,px,py; one row per cell centre, row-major.
std::string density_csv(const DensityGrid& grid);
/// Header x,y,zx,zy over active cells.
std::string field_csv(const DualField& field);
/// Header x,y,value over active cells.
std::string scalar_csv(const GridSpec& grid, const std::vector<double>& values, const std::vector<char>& active);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lgp::io
