#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lgp/reconstruct.hpp"

namespace lgp::svg {

/// Faces filled by value, chords stroked with width proportional to mass.
std::string solution_svg(const PlanarSolution& sol);

/// Level lines of f over the domain by marching squares on an n × n grid.
std::string contour_svg(const ConvexDomain& domain, const std::function<double(Vec2)>& f,
                        const std::vector<double>& levels, std::size_t n, const std::string& title);

/// Heat map of f over the domain on an n × n grid with optional overlay segments.
std::string heatmap_svg(const ConvexDomain& domain, const std::function<double(Vec2)>& f, std::size_t n,
                        const std::string& title, const std::vector<std::pair<Vec2, Vec2>>& overlay = {});

}  // namespace lgp::svg
