#pragma once

#include "relreg/simulation.hpp"

#include <json.hpp>

namespace relreg::cli {

using Json = nlohmann::ordered_json;

Json law_to_json(const Law& law);
Law law_from_json(const Json& j);

//! JSON mirror of SimConfig. Missing keys keep the defaults of `base`.
Json sim_config_to_json(const SimConfig& config);
SimConfig sim_config_from_json(const Json& j,
                               SimConfig base = SimConfig::linear_default());

//! Parses "normal:mu,sigma", "exp:rate" or "fixed:value".
Law parse_law(const std::string& text);

} // namespace relreg::cli
