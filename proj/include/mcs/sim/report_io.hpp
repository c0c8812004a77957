#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcs/sim/monte_carlo.hpp"

namespace mcs {

// mechanism, replication, seed, then the metric columns.
void write_replications_csv(std::ostream& out, const MonteCarloResult& result);

// Per-mechanism mean and std of every metric.
nlohmann::json aggregate_json(const MonteCarloResult& result, const MonteCarloConfig& cfg);

// Inputs of a run, written before any result, then completed with the
// digests of the files it produced.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::string scenario_digest;
  std::vector<std::string> mechanisms;
  int replications = 0;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
  nlohmann::json options = nlohmann::json::object();
  std::map<std::string, std::string> artifacts;  // file name -> digest

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// FNV-1a 64 of the bytes, as 16 hex digits.
std::string digest_bytes(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mcs
