// mcs_market: scenario generation, mechanism runs and property checks.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 internal error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "mcs/core/errors.hpp"
#include "mcs/core/generator.hpp"
#include "mcs/core/scenario.hpp"
#include "mcs/core/scenario_json.hpp"
#include "mcs/core/worker_csv.hpp"
#include "mcs/matching/ft_m2m.hpp"
#include "mcs/matching/matching_json.hpp"
#include "mcs/sim/monte_carlo.hpp"
#include "mcs/sim/report_io.hpp"
#include "mcs/sim/verify_suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  const char* env = std::getenv("MCS_LOG_LEVEL");
  if (env == nullptr) return;
  const std::string v = env;
  if (v == "error")
    spdlog::set_level(spdlog::level::err);
  else if (v == "warn")
    spdlog::set_level(spdlog::level::warn);
  else if (v == "info")
    spdlog::set_level(spdlog::level::info);
  else if (v == "debug")
    spdlog::set_level(spdlog::level::debug);
  else
    throw mcs::ConfigError("MCS_LOG_LEVEL must be one of error, warn, info, debug");
}

struct GenerateArgs {
  std::string config;
  std::string preset = "default";
  std::optional<std::size_t> tasks;
  std::optional<std::size_t> workers;
  std::uint64_t seed = 1;
  std::string workers_csv;
  std::string out;
};

mcs::GenConfig load_gen_config(const std::string& path, const std::string& preset) {
  if (preset != "default" && preset != "literal") throw mcs::ConfigError("preset must be default or literal");
  mcs::GenConfig g = preset == "literal" ? mcs::GenConfig::literal_units() : mcs::GenConfig::defaults();
  if (!path.empty()) {
    json j = mcs::read_json_file(path);
    if (!j.contains("preset")) j["preset"] = preset;
    g = mcs::gen_config_from_json(j);
  }
  return g;
}

int cmd_generate(const GenerateArgs& a) {
  mcs::GenConfig g = load_gen_config(a.config, a.preset);
  if (a.tasks) g.n_tasks = *a.tasks;
  if (a.workers) g.n_workers = *a.workers;
  g.validate();
  mcs::Scenario s;
  if (a.workers_csv.empty()) {
    s = mcs::generate_scenario(g, a.seed);
  } else {
    s = mcs::generate_scenario(g, a.seed, mcs::load_worker_csv(a.workers_csv));
  }
  mcs::require_valid(s);

  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  mcs::save_scenario(s, out);

  mcs::RunManifest m;
  m.command = "generate";
  m.config_path = a.config;
  m.base_seed = a.seed;
  m.seeds = {a.seed};
  m.output_dir = out.has_parent_path() ? out.parent_path().string() : ".";
  m.options = {{"generator", mcs::to_json(g)}, {"workers_csv", a.workers_csv}};
  m.artifacts[out.filename().string()] = mcs::file_digest(out);
  m.scenario_digest = m.artifacts[out.filename().string()];
  mcs::write_json_file(m.to_json(), fs::path(out.string() + ".manifest.json"));
  std::printf("wrote %s (%zu tasks, %zu workers)\n", out.string().c_str(), s.tasks.size(), s.workers.size());
  return kOk;
}

struct RunArgs {
  std::string scenario;
  std::string config;
  std::string preset = "default";
  std::optional<std::size_t> tasks;
  std::optional<std::size_t> workers;
  std::string mechanisms = "stagewise";
  int replications = 1;
  std::uint64_t seed = 1;
  std::string out;
  unsigned parallel = 1;
  int episodes = 20;
  int futures_iters = 50;
  int spot_iters = 20;
  std::string manifest;
};

json run_options(const RunArgs& a) {
  return {{"preset", a.preset},
          {"tasks", a.tasks ? json(*a.tasks) : json(nullptr)},
          {"workers", a.workers ? json(*a.workers) : json(nullptr)},
          {"scenario", a.scenario},
          {"episodes", a.episodes},
          {"futures_iters", a.futures_iters},
          {"spot_iters", a.spot_iters},
          {"parallel", a.parallel}};
}

RunArgs args_from_manifest(const std::string& path, const std::string& out) {
  const auto m = mcs::RunManifest::from_json(mcs::read_json_file(path));
  if (m.command != "run") throw mcs::ConfigError("manifest was not written by the run command");
  RunArgs a;
  a.config = m.config_path;
  a.replications = m.replications;
  a.seed = m.base_seed;
  a.out = out.empty() ? m.output_dir : out;
  a.mechanisms.clear();
  for (const auto& name : m.mechanisms) a.mechanisms += (a.mechanisms.empty() ? "" : ",") + name;
  const json& o = m.options;
  a.preset = o.value("preset", a.preset);
  if (o.contains("tasks") && !o["tasks"].is_null()) a.tasks = o["tasks"].get<std::size_t>();
  if (o.contains("workers") && !o["workers"].is_null()) a.workers = o["workers"].get<std::size_t>();
  a.scenario = o.value("scenario", std::string());
  a.episodes = o.value("episodes", a.episodes);
  a.futures_iters = o.value("futures_iters", a.futures_iters);
  a.spot_iters = o.value("spot_iters", a.spot_iters);
  a.parallel = o.value("parallel", a.parallel);
  if (!a.scenario.empty() && !m.scenario_digest.empty() && mcs::file_digest(a.scenario) != m.scenario_digest)
    throw mcs::ConfigError("scenario file changed since the manifest was written");
  return a;
}

void print_table(const mcs::MonteCarloResult& r) {
  std::printf("%-18s", "mechanism");
  for (const auto& f : mcs::kMetricFields) std::printf(" %14s", std::string(f.name).c_str());
  std::printf("\n");
  for (const auto& s : r.summaries) {
    std::printf("%-18s", std::string(mcs::mechanism_name(s.mechanism)).c_str());
    for (const auto& st : s.report.stats) std::printf(" %14.4g", st.mean);
    std::printf("\n");
  }
}

int cmd_run(RunArgs a) {
  if (!a.manifest.empty()) a = args_from_manifest(a.manifest, a.out);
  if (a.out.empty()) throw mcs::ConfigError("--out is required");
  if (!a.scenario.empty() && !a.config.empty()) throw mcs::ConfigError("give either --scenario or --config, not both");

  mcs::MonteCarloConfig cfg;
  cfg.mechanisms = mcs::parse_mechanism_list(a.mechanisms);
  cfg.replications = a.replications;
  cfg.base_seed = a.seed;
  cfg.parallel = a.parallel;
  cfg.mechanism.training_episodes = a.episodes;
  cfg.mechanism.futures_aco.iter_max = a.futures_iters;
  cfg.mechanism.spot_aco.iter_max = a.spot_iters;
  cfg.mechanism.validate();

  mcs::ScenarioSource source;
  mcs::RunManifest manifest;
  if (!a.scenario.empty()) {
    source.fixed = mcs::load_scenario(a.scenario);
    mcs::require_valid(*source.fixed);
    manifest.scenario_digest = mcs::file_digest(a.scenario);
  } else {
    source.gen = load_gen_config(a.config, a.preset);
    if (a.tasks) source.gen.n_tasks = *a.tasks;
    if (a.workers) source.gen.n_workers = *a.workers;
    source.gen.validate();
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  manifest.command = "run";
  manifest.config_path = a.config;
  for (auto m : cfg.mechanisms) manifest.mechanisms.emplace_back(mcs::mechanism_name(m));
  manifest.replications = a.replications;
  manifest.base_seed = a.seed;
  for (int r = 0; r < a.replications; ++r) manifest.seeds.push_back(mcs::replication_seed(a.seed, r));
  manifest.output_dir = dir.string();
  manifest.options = run_options(a);
  if (!source.fixed) manifest.options["generator"] = mcs::to_json(source.gen);
  mcs::write_json_file(manifest.to_json(), dir / "manifest.json");

  spdlog::info("running {} mechanism(s) x {} replication(s)", cfg.mechanisms.size(), a.replications);
  const auto result = mcs::run_monte_carlo(source, cfg);

  std::ostringstream csv;
  mcs::write_replications_csv(csv, result);
  mcs::write_text_file(dir / "replications.csv", csv.str());
  mcs::write_json_file(mcs::aggregate_json(result, cfg), dir / "aggregate.json");
  for (const char* name : {"replications.csv", "aggregate.json"}) manifest.artifacts[name] = mcs::file_digest(dir / name);
  mcs::write_json_file(manifest.to_json(), dir / "manifest.json");

  print_table(result);
  return kOk;
}

struct MatchArgs {
  std::string scenario;
  std::uint64_t seed = 1;
  int aco_iters = 50;
  std::string out;
};

int cmd_match(const MatchArgs& a) {
  const auto s = mcs::load_scenario(a.scenario);
  mcs::require_valid(s);
  mcs::AcoConfig aco;
  aco.iter_max = a.aco_iters;
  aco.validate();
  const auto m = mcs::run_ft_m2m(s, aco, a.seed);
  mcs::write_json_file(mcs::to_json(m), a.out);
  std::printf("wrote %s (%zu contracts, %d rounds)\n", a.out.c_str(), m.contracts.size(), m.rounds);
  return kOk;
}

struct VerifyArgs {
  std::string suite;
  int trials = 50;
  std::uint64_t seed = 1;
  int aco_iters = 50;
  std::string scenario;
  std::string inject;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  const auto suite = mcs::parse_suite(a.suite);
  if (!suite) throw mcs::ConfigError("unknown suite '" + a.suite + "'");
  mcs::AcoConfig aco;
  aco.iter_max = a.aco_iters;
  aco.validate();

  mcs::SuiteReport report;
  if (!a.inject.empty()) {
    if (a.scenario.empty()) throw mcs::ConfigError("--inject needs --scenario");
    const auto s = mcs::load_scenario(a.scenario);
    mcs::require_valid(s);
    const auto m = mcs::matching_from_json(mcs::read_json_file(a.inject), s);
    report = mcs::check_matching(*suite, m, s);
  } else {
    report = mcs::run_suite(*suite, a.trials, a.seed, aco);
  }
  const json j = report.to_json();
  if (!a.out.empty()) mcs::write_json_file(j, a.out);
  if (report.passed()) {
    std::printf("%s: %zu checks over %d trial(s), no violations\n", a.suite.c_str(), report.checks, report.trials);
    return kOk;
  }
  std::printf("%s: %zu violation(s)\n%s\n", a.suite.c_str(), report.findings.size(),
              j["findings"][0].dump(2).c_str());
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage crowdsensing market simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a scenario file");
  g->add_option("--config", gen.config, "Generator configuration (JSON)")->check(CLI::ExistingFile);
  g->add_option("--preset", gen.preset, "default or literal")->check(CLI::IsMember({"default", "literal"}));
  g->add_option("--tasks", gen.tasks, "Number of tasks");
  g->add_option("--workers", gen.workers, "Number of workers");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--workers-csv", gen.workers_csv, "Worker table (id,lon,lat,speed,e_c,e_D,e_t,e_m,f)")
      ->check(CLI::ExistingFile);
  g->add_option("--out", gen.out, "Scenario output path")->required();

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run mechanisms over seeded replications");
  r->add_option("--scenario", run.scenario, "Fixed scenario file")->check(CLI::ExistingFile);
  r->add_option("--config", run.config, "Generator configuration; a scenario is drawn per replication")
      ->check(CLI::ExistingFile);
  r->add_option("--preset", run.preset, "default or literal")->check(CLI::IsMember({"default", "literal"}));
  r->add_option("--tasks", run.tasks, "Tasks per generated scenario");
  r->add_option("--workers", run.workers, "Workers per generated scenario");
  r->add_option("--mechanism", run.mechanisms, "Comma-separated mechanisms, or all");
  r->add_option("--replications", run.replications, "Replications")->check(CLI::PositiveNumber);
  r->add_option("--seed", run.seed, "Base seed");
  r->add_option("--out", run.out, "Output directory");
  r->add_option("--parallel", run.parallel, "Worker threads")->check(CLI::PositiveNumber);
  r->add_option("--episodes", run.episodes, "Policy training episodes per replication")->check(CLI::NonNegativeNumber);
  r->add_option("--futures-iters", run.futures_iters, "Planner iterations in the futures market")
      ->check(CLI::PositiveNumber);
  r->add_option("--spot-iters", run.spot_iters, "Planner iterations in temporary markets")->check(CLI::PositiveNumber);
  r->add_option("--manifest", run.manifest, "Replay the run recorded in a manifest")->check(CLI::ExistingFile);

  MatchArgs mat;
  auto* mt = app.add_subcommand("match", "Run the futures market on a scenario and store the matching");
  mt->add_option("--scenario", mat.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  mt->add_option("--seed", mat.seed, "Seed");
  mt->add_option("--aco-iters", mat.aco_iters, "Planner iterations")->check(CLI::PositiveNumber);
  mt->add_option("--out", mat.out, "Matching output path")->required();

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check matching properties on seeded instances");
  v->add_option("--suite", ver.suite, "stability, rationality, equilibrium or oracles")->required();
  v->add_option("--trials", ver.trials, "Seeded instances")->check(CLI::PositiveNumber);
  v->add_option("--seed", ver.seed, "Base seed");
  v->add_option("--aco-iters", ver.aco_iters, "Planner iterations")->check(CLI::PositiveNumber);
  v->add_option("--scenario", ver.scenario, "Scenario of an injected matching")->check(CLI::ExistingFile);
  v->add_option("--inject", ver.inject, "Check this matching file instead of generated instances")
      ->check(CLI::ExistingFile);
  v->add_option("--out", ver.out, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    configure_logging();
    if (g->parsed()) return cmd_generate(gen);
    if (r->parsed()) return cmd_run(run);
    if (mt->parsed()) return cmd_match(mat);
    if (v->parsed()) return cmd_verify(ver);
  } catch (const mcs::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const mcs::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const mcs::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternal;
  }
  return kUsage;
}
