#pragma once

// nlohmann-level (de)serializers shared by the tree and ensemble formats.

#include <json.hpp>

#include "tsw/tree.hpp"

namespace tsw::detail {

nlohmann::json tree_to_json_value(const RootedTree& tree);
RootedTree tree_from_json_value(const nlohmann::json& doc);

}  // namespace tsw::detail
