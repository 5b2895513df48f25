#pragma once

// Internal JSON helpers shared between the tree store and run configs.

#include <json.hpp>

#include "shp/tree.hpp"

namespace shp {

nlohmann::json tree_config_to_json(const TreeConfig& c);
TreeConfig tree_config_from_json(const nlohmann::json& j);

}  // namespace shp
