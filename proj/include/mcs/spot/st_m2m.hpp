#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcs/matching/market.hpp"

namespace mcs {

// Market state at timeslot t of the transaction.
struct SpotMarketState {
  int t = 0;
  std::vector<std::size_t> tasks;    // S'<t>: tasks with surplus budget looking for temporary workers
  std::vector<std::size_t> workers;  // W'<t>: workers available for temporary work
  std::vector<PlanStart> starts;     // by worker index: where and when spot work could begin
  std::vector<double> budgets;       // by task index: residual budget B_i^t
};

struct SpotOptions {
  AcoConfig aco;
  bool risk_gates = true;
  bool time_windows = true;
  std::uint64_t seed = 0;
};

MarketSpec spot_market(const SpotMarketState& state, const Scenario& s, const SpotOptions& opt);

// Temporary recruitment: the futures round structure with residual budgets,
// the spot risk thresholds and no quality withdrawal. Contracts carry stage
// spot.
Matching run_st_m2m(const SpotMarketState& state, const Scenario& s, const SpotOptions& opt);

}  // namespace mcs
