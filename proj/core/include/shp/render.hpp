#pragma once

#include <string>
#include <vector>

#include "shp/graph.hpp"

namespace shp {

// Deterministic SVG map: blocks as area-sized cells at their centroids,
// one color per district.
std::string plan_to_svg(const AdjacencyGraph& graph,
                        const std::vector<std::vector<int>>& plan);

void render_plan(const AdjacencyGraph& graph, const std::vector<std::vector<int>>& plan,
                 const std::string& path);

// Minimal box-plot SVG for method comparisons: one box per labeled series.
std::string boxplot_svg(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& series, const std::string& title);

}  // namespace shp
