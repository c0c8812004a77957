#include "mcs/sim/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/core/scenario_json.hpp"

namespace mcs {

namespace {

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_replications_csv(std::ostream& out, const MonteCarloResult& result) {
  out << "mechanism,replication,seed";
  for (const auto& f : kMetricFields) out << ',' << f.name;
  out << '\n';
  for (const auto& row : result.rows) {
    out << mechanism_name(row.mechanism) << ',' << row.replication << ',' << row.seed;
    for (const auto& f : kMetricFields) out << ',' << number(row.metrics.*f.member);
    out << '\n';
  }
}

nlohmann::json aggregate_json(const MonteCarloResult& result, const MonteCarloConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["replications"] = cfg.replications;
  j["base_seed"] = cfg.base_seed;
  j["mechanisms"] = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    nlohmann::json m;
    m["name"] = mechanism_name(s.mechanism);
    m["replications"] = s.report.replications;
    for (std::size_t i = 0; i < kMetricFields.size(); ++i)
      m["metrics"][std::string(kMetricFields[i].name)] = {{"mean", s.report.stats[i].mean},
                                                          {"std", s.report.stats[i].std}};
    double worst = 0.0;
    for (const auto& row : result.rows)
      if (row.mechanism == s.mechanism) worst = std::max(worst, row.conservation_error);
    m["max_conservation_error"] = worst;
    j["mechanisms"].push_back(m);
  }
  return j;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config_path"] = config_path;
  j["scenario_digest"] = scenario_digest;
  j["mechanisms"] = mechanisms;
  j["replications"] = replications;
  j["base_seed"] = base_seed;
  j["seeds"] = seeds;
  j["output_dir"] = output_dir;
  j["options"] = options;
  j["artifacts"] = artifacts;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw ParseError("unsupported manifest schema", 0);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_path = j.at("config_path").get<std::string>();
    m.scenario_digest = j.value("scenario_digest", "");
    m.mechanisms = j.at("mechanisms").get<std::vector<std::string>>();
    m.replications = j.at("replications").get<int>();
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    m.output_dir = j.at("output_dir").get<std::string>();
    m.options = j.value("options", nlohmann::json::object());
    m.artifacts = j.value("artifacts", std::map<std::string, std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what(), 0);
  }
}

std::string digest_bytes(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_name(bytes)));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return digest_bytes(bytes);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace mcs
