#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mcs/core/generator.hpp"
#include "mcs/sim/mechanisms.hpp"

namespace mcs {

// A fixed scenario, or a generator configuration drawn anew per replication.
struct ScenarioSource {
  std::optional<Scenario> fixed;
  GenConfig gen;

  Scenario make(std::uint64_t replication_seed) const;
};

struct MonteCarloConfig {
  std::vector<Mechanism> mechanisms;
  int replications = 1;
  std::uint64_t base_seed = 1;
  unsigned parallel = 1;  // worker threads
  MechanismConfig mechanism;
};

std::uint64_t replication_seed(std::uint64_t base_seed, int replication);

struct ReplicationRow {
  Mechanism mechanism = Mechanism::stagewise;
  int replication = 0;
  std::uint64_t seed = 0;
  ReplicationMetrics metrics;
  double conservation_error = 0.0;
};

struct MechanismSummary {
  Mechanism mechanism = Mechanism::stagewise;
  MetricsReport report;
};

struct MonteCarloResult {
  std::vector<ReplicationRow> rows;  // by (mechanism in config order, replication)
  std::vector<MechanismSummary> summaries;

  // Rows of one mechanism in replication order.
  std::vector<ReplicationRow> rows_of(Mechanism m) const;
};

// Called once per finished replication with every mechanism's full run; may
// be invoked from worker threads, one call at a time.
using ReplicationObserver = std::function<void(int replication, const std::vector<MechanismRun>& runs)>;

// Every mechanism sees the same scenario and seed within a replication.
// Threads take whole replications; results are placed by index, so the
// output does not depend on the thread count.
MonteCarloResult run_monte_carlo(const ScenarioSource& source, const MonteCarloConfig& cfg,
                                 const ReplicationObserver& observe = {});

}  // namespace mcs
