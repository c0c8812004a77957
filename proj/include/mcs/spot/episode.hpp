#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcs/core/types.hpp"
#include "mcs/matching/market.hpp"
#include "mcs/planner/path_model.hpp"
#include "mcs/spot/agent.hpp"
#include "mcs/spot/environment.hpp"
#include "mcs/spot/st_m2m.hpp"

namespace mcs {

// Seed of the realized world (delays, channels) behind a replication seed;
// shared by every mechanism run on that seed.
std::uint64_t world_seed(std::uint64_t seed);

// Where the worker is expected to be free for new work: the end of its
// remaining path, walked at expected delays and the mean channel.
PlanStart spot_start(const Environment& env, std::size_t worker, const PathModel& model);

struct SpotRecruitment {
  MessageTally messages;
  int markets = 0;            // markets held
  std::size_t contracts = 0;  // spot contracts signed
};

// Holds one temporary market over `tasks` at the current slot and signs the
// result into the environment. A worker never re-enters a task it still owes.
SpotRecruitment recruit_spot(Environment& env, std::span<const std::size_t> tasks, const std::vector<PathModel>& models,
                             const SpotOptions& opt);

struct EpisodeConfig {
  bool spot = true;   // recruit temporary workers for tasks that lost theirs
  bool learn = true;  // store experience and train after the episode
  double epsilon = 0.0;
  double beta = 1.0;
  SpotOptions spot_options;
};

struct EpisodeTrace {
  TransactionLog log;
  std::vector<double> rewards;  // by worker
  double total_reward = 0.0;
  SpotRecruitment spot;
  std::size_t decisions = 0;
  std::vector<double> losses;  // training losses after the episode
};

// Plays one transaction: futures contracts are loaded as binding, each
// worker decides every slot whether to keep its target, abandoned or timed
// out tasks go back to a spot market at the start of the next slot.
EpisodeTrace run_episode(const Scenario& s, const Matching& futures, std::vector<DqnAgent>& agents,
                         const EpisodeConfig& cfg, std::uint64_t seed);

std::vector<DqnAgent> make_agents(const Scenario& s, const TrainConfig& cfg, std::uint64_t seed);

struct TrainingReport {
  std::vector<double> episode_rewards;
  std::vector<double> mean_losses;  // NaN where no update ran
};

// `episodes` learning episodes with decaying exploration; each episode draws
// its own realization of the uncertainty.
TrainingReport train_agents(const Scenario& s, const Matching& futures, std::vector<DqnAgent>& agents, int episodes,
                            const EpisodeConfig& base, std::uint64_t seed);

}  // namespace mcs
