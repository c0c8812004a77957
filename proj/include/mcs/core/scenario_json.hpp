#pragma once

#include <filesystem>

#include <json.hpp>

#include "mcs/core/generator.hpp"
#include "mcs/core/types.hpp"

namespace mcs {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GenConfig& cfg);
// Missing keys keep their defaults.
GenConfig gen_config_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace mcs
