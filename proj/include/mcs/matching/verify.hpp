#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcs/matching/market.hpp"

namespace mcs {

struct CoalitionLimits {
  std::size_t max_workers = 8;
  std::size_t max_tasks = 6;
  std::size_t max_eviction = 3;
};

struct Coalition {
  int type = 1;  // 1: needs evictions, 2: slack budget suffices
  std::size_t worker = 0;
  std::vector<std::size_t> tasks;
  std::vector<std::vector<std::size_t>> evictions;  // per task in `tasks`
  double worker_utility_before = 0.0;
  double worker_utility_after = 0.0;
  std::string describe(const Scenario& s) const;
};

// Exhaustive search for Type-1/Type-2 blocking coalitions. Throws
// ContractViolation when the instance exceeds the limits.
std::vector<Coalition> find_blocking_coalitions(const Matching& m, const Scenario& s,
                                                const CoalitionLimits& limits = {});

struct Violation {
  std::string kind;
  std::string detail;
};

std::vector<Violation> check_individual_rationality(const Matching& m, const Scenario& s);
std::vector<Violation> check_competitive_equilibrium(const Matching& m, const Scenario& s);

double expected_social_welfare(const Matching& m, const Scenario& s);
double expected_task_utility_of(const Matching& m, const Scenario& s, std::size_t task);
double expected_worker_utility_of(const Matching& m, const Scenario& s, std::size_t worker);

}  // namespace mcs
