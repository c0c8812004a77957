#include "mcs/matching/ft_m2m.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcs/economics/utility.hpp"

namespace mcs {

MarketSpec futures_market(const Scenario& s, const FuturesOptions& opt) {
  MarketSpec spec;
  spec.scenario = &s;
  spec.stage = TradeStage::futures;
  spec.tasks.resize(s.tasks.size());
  std::iota(spec.tasks.begin(), spec.tasks.end(), 0);
  spec.workers.resize(s.workers.size());
  std::iota(spec.workers.begin(), spec.workers.end(), 0);
  for (const auto& w : s.workers) spec.starts.push_back({w.start, 0.0});
  for (const auto& t : s.tasks) spec.budgets.push_back(t.budget);
  spec.rules = PlanningRules::futures(s.econ);
  spec.rules.risk_gates = opt.risk_gates;
  spec.rules.time_windows = opt.time_windows;
  spec.quality_gate = opt.risk_gates;
  spec.quality_rho = s.econ.rho[0];
  spec.initial_prices = s.econ.p_desire;
  spec.aco = opt.aco;
  spec.dp = s.econ.dp;
  spec.seed = opt.seed;
  return spec;
}

Matching run_ft_m2m(const Scenario& s, const FuturesOptions& opt) { return run_market(futures_market(s, opt)); }

Matching run_ft_m2m(const Scenario& s, const AcoConfig& aco, std::uint64_t seed) {
  FuturesOptions opt;
  opt.aco = aco;
  opt.seed = seed;
  return run_ft_m2m(s, opt);
}

int convergence_round_bound(const Scenario& s) {
  double headroom = 0.0;
  for (std::size_t w = 0; w < s.workers.size(); ++w)
    for (std::size_t t = 0; t < s.tasks.size(); ++t) {
      ExpectationInputs in{s.uncertainty.delay(w, t), s.uncertainty.channel(), s.econ.cost_weight,
                           s.econ.bandwidth_hz};
      double c = expected_cost(s.workers[w], s.tasks[t], s.workers[w].start, in);
      headroom = std::max(headroom, s.econ.p_desire(w, t) - c);
    }
  return static_cast<int>(std::ceil(headroom / s.econ.dp - 1e-9)) + 1;
}

}  // namespace mcs
