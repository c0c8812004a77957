#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcs/core/generator.hpp"
#include "mcs/matching/market.hpp"

namespace mcs {

enum class Suite { stability, rationality, equilibrium, oracles };

std::optional<Suite> parse_suite(std::string_view name);
std::string_view suite_name(Suite s);

struct SuiteFinding {
  std::string what;
  nlohmann::json counterexample;
};

struct SuiteReport {
  Suite suite = Suite::stability;
  int trials = 0;
  std::size_t checks = 0;
  std::vector<SuiteFinding> findings;

  bool passed() const { return findings.empty(); }
  nlohmann::json to_json() const;
};

// Small instance for exhaustive checks: 3 to 6 tasks, 4 to 8 workers.
Scenario small_instance(std::uint64_t seed, const GenConfig& base = GenConfig::defaults());

// Temporary-market state used to exercise ST-M2M on a small instance: every
// task and worker at a slot drawn from the first fifth of the horizon.
Matching small_spot_matching(const Scenario& s, std::uint64_t seed, const AcoConfig& aco);

// `trials` seeded instances through the suite. Market suites run FT-M2M
// and ST-M2M on each; the oracle suite compares the knapsack against
// subset enumeration, enumerated completion probabilities against sampling,
// and the age closed form against direct summation.
SuiteReport run_suite(Suite suite, int trials, std::uint64_t seed, const AcoConfig& aco);

// Checks one given matching (for example a stored file) with a market suite.
SuiteReport check_matching(Suite suite, const Matching& m, const Scenario& s);

}  // namespace mcs
