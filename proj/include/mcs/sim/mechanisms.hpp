#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcs/matching/ft_m2m.hpp"
#include "mcs/sim/interaction.hpp"
#include "mcs/sim/metrics.hpp"
#include "mcs/spot/agent.hpp"
#include "mcs/spot/environment.hpp"
#include "mcs/spot/st_m2m.hpp"

namespace mcs {

enum class Mechanism { stagewise, stagewise_no_td, stagewise_no_risk, conspot, conspot_no_td, quality_p, random_m };

const std::vector<Mechanism>& all_mechanisms();
std::string_view mechanism_name(Mechanism m);
std::optional<Mechanism> parse_mechanism(std::string_view name);
// Comma-separated names; throws ConfigError on an unknown one.
std::vector<Mechanism> parse_mechanism_list(std::string_view list);

struct MechanismConfig {
  AcoConfig futures_aco = aco_with_iterations(50);
  AcoConfig spot_aco = aco_with_iterations(20);
  TrainConfig train;
  int training_episodes = 20;
  bool train_with_spot = false;  // recruit temporary workers inside training episodes too
  InteractionCostModel interaction;

  static AcoConfig aco_with_iterations(int iter_max);
  void validate() const;  // throws ConfigError
};

struct MechanismRun {
  Mechanism mechanism = Mechanism::stagewise;
  std::uint64_t seed = 0;
  std::optional<Matching> futures;  // when a futures stage ran
  TransactionLog log;
  MessageTally messages;
  ReplicationMetrics metrics;
  double conservation_error = 0.0;
};

// One replication: matching, transaction and metrics. Mechanisms given the
// same seed see the same realization of delays and channels.
MechanismRun run_mechanism(Mechanism mechanism, const Scenario& s, const MechanismConfig& cfg, std::uint64_t seed);

// Aggregate over the given seeds.
MetricsReport run_mechanism(Mechanism mechanism, const Scenario& s, const MechanismConfig& cfg,
                            std::span<const std::uint64_t> seeds);

// Executes fixed contracts with workers that never abandon.
TransactionLog execute_contracts(const Scenario& s, const Matching& m, std::uint64_t seed);

struct ConspotOutcome {
  TransactionLog log;
  MessageTally messages;
  int markets = 0;
};

// Slot-by-slot recruitment without futures contracts: every slot, each
// worker that is neither serving nor delayed gives up its unsigned target,
// a next-hop market runs at the desired prices, and the worker takes its
// best accepted task. Unsigned work carries no compensation.
ConspotOutcome run_conspot(const Scenario& s, const SpotOptions& opt, std::uint64_t seed);

}  // namespace mcs
