#pragma once

#include <string>

#include "json.hpp"
#include "relsys/system.hpp"

namespace relsys {

/// Builds a validated SystemModel from the config object. Errors name the
/// offending field path (e.g. "nodes[2].baseline.rate").
SystemModel model_from_json(const nlohmann::json& config);
SystemModel model_from_json_text(const std::string& text);

/// Inverse of model_from_json; parse(serialize(m)) == serialize-identical.
nlohmann::json model_to_json(const SystemModel& model);

}  // namespace relsys
