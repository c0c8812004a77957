#pragma once

#include <filesystem>

#include <json.hpp>

#include "mcs/matching/market.hpp"

namespace mcs {

// Tasks and workers are referenced by their position in the scenario.
nlohmann::json to_json(const Matching& m);
Matching matching_from_json(const nlohmann::json& j, const Scenario& s);

}  // namespace mcs
