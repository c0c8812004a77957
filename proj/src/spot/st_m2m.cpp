#include "mcs/spot/st_m2m.hpp"

#include "mcs/core/errors.hpp"

namespace mcs {

MarketSpec spot_market(const SpotMarketState& state, const Scenario& s, const SpotOptions& opt) {
  if (state.t < 0 || state.t > s.horizon) throw ContractViolation("spot market outside the horizon");
  if (state.starts.size() != s.workers.size() || state.budgets.size() != s.tasks.size())
    throw ContractViolation("spot market state does not match the scenario");
  MarketSpec spec;
  spec.scenario = &s;
  spec.stage = TradeStage::spot;
  spec.tasks = state.tasks;
  spec.workers = state.workers;
  spec.starts = state.starts;
  spec.budgets = state.budgets;
  spec.rules = PlanningRules::spot(s.econ);
  spec.rules.risk_gates = opt.risk_gates;
  spec.rules.time_windows = opt.time_windows;
  spec.quality_gate = false;
  spec.quality_rho = s.econ.rho[0];
  spec.initial_prices = s.econ.p_desire;
  spec.aco = opt.aco;
  spec.dp = s.econ.dp;
  spec.seed = opt.seed;
  return spec;
}

Matching run_st_m2m(const SpotMarketState& state, const Scenario& s, const SpotOptions& opt) {
  return run_market(spot_market(state, s, opt));
}

}  // namespace mcs
