#pragma once

#include <cstdint>

#include "mcs/matching/market.hpp"

namespace mcs {

struct FuturesOptions {
  AcoConfig aco;
  bool risk_gates = true;
  bool time_windows = true;
  std::uint64_t seed = 0;
};

MarketSpec futures_market(const Scenario& s, const FuturesOptions& opt);
Matching run_ft_m2m(const Scenario& s, const FuturesOptions& opt);
Matching run_ft_m2m(const Scenario& s, const AcoConfig& aco, std::uint64_t seed);

// ceil(max over pairs of (p_desire - E[c] from the worker's start) / dp) + 1
int convergence_round_bound(const Scenario& s);

}  // namespace mcs
