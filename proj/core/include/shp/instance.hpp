#pragma once

#include <string>

#include "shp/elections.hpp"
#include "shp/graph.hpp"

namespace shp {

struct Instance {
    AdjacencyGraph graph;
    ElectionReturns returns;
};

// Parses the instance JSON schema:
//   { "blocks": [{"id", "population", "x", "y", "area"}],
//     "edges": [[a, b], ...],
//     "elections": { "<name>": [share per block id] } }
// The returned graph is repaired to a single component.
Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Rook-adjacency grid state with Gaussian population bumps at urban centers
// and a partisan gradient that leans Democratic toward them. Deterministic
// per seed.
Instance synthetic_state(int width, int height, int urban_centers, std::uint64_t seed);

}  // namespace shp
