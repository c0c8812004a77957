#include "mcs/planner/path_model.hpp"

#include <algorithm>
#include <cmath>

#include "mcs/core/errors.hpp"
#include "mcs/economics/costs.hpp"
#include "mcs/economics/utility.hpp"
#include "mcs/stochastic/risk.hpp"

namespace mcs {

namespace {
constexpr double kTimeEps = 1e-9;
}

PlanningRules PlanningRules::futures(const EconomicConfig& e) {
  PlanningRules r;
  r.u_min = e.u_min;
  r.rho_utility = e.rho[1];
  r.rho_completion = e.rho[2];
  r.q_frac = e.q_frac;
  return r;
}

PlanningRules PlanningRules::spot(const EconomicConfig& e) {
  PlanningRules r;
  r.u_min = e.u_min;
  r.rho_utility = e.rho[3];
  r.rho_completion = e.rho[4];
  r.q_frac = e.q_frac;
  return r;
}

PathModel::PathModel(const Scenario& s, std::size_t worker) : scenario_(&s), worker_(worker) {
  if (worker >= s.workers.size()) throw ContractViolation("worker index out of range");
  const auto& w = s.workers[worker];
  const auto channel = s.uncertainty.channel();
  per_task_.resize(s.tasks.size());
  delay_cache_.resize(s.tasks.size());
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const auto& t = s.tasks[i];
    auto& terms = per_task_[i];
    terms.tau_sense = t.data_bits > 0.0 ? mcs::sensing_slots(w, t) : 0;
    terms.tau_tran_mean = mcs::expected_transmission_slots(w, t, channel, s.econ.bandwidth_hz);
    terms.expected_age = (terms.tau_sense + terms.tau_tran_mean + 1.0) / 2.0;
    terms.service_cost = w.sense_cost * terms.tau_sense + w.transmit_power * terms.tau_tran_mean;
    terms.delay = s.uncertainty.delay(worker, i);
    terms.tran_hist = transmission_histogram({t.data_bits, s.econ.bandwidth_hz, w.transmit_power}, channel);
  }
}

const DelayDistribution& PathModel::delay_distribution(std::size_t task, int tau_move) const {
  auto& cache = delay_cache_[task];
  auto it = cache.find(tau_move);
  if (it == cache.end()) it = cache.emplace(tau_move, DelayDistribution(per_task_[task].delay, tau_move)).first;
  return it->second;
}

double PathModel::completion_prob(int tau_move, double depart, std::size_t task) const {
  const auto& t = scenario_->tasks[task];
  const auto& terms = per_task_[task];
  const double slack = t.t_end - depart;
  const double open_offset = t.t_begin - depart;
  const auto& dist = delay_distribution(task, tau_move);
  double pr = 0.0;
  for (auto [slots, weight] : terms.tran_hist) {
    const double service = terms.tau_sense + slots;
    if (open_offset + service > slack + kTimeEps) continue;
    pr += weight * dist.cdf(slack - service - tau_move);
  }
  return std::clamp(pr, 0.0, 1.0);
}

StepEstimate PathModel::estimate_moves(int tau_move, double depart, std::size_t task, double payment,
                                       const PlanningRules& rules) const {
  const auto& s = *scenario_;
  const auto& t = s.tasks[task];
  const auto& w = s.workers[worker_];
  const auto& terms = per_task_[task];

  StepEstimate e;
  e.task = task;
  e.depart = depart;
  e.tau_move = tau_move;
  e.expected_delay = tau_move * terms.delay.a * 0.5 * (terms.delay.t_min + terms.delay.t_max);
  e.arrival = depart + tau_move + e.expected_delay;
  e.service_start = std::max<double>(e.arrival, t.t_begin);
  e.wait = std::max(t.t_begin - e.arrival, 0.0);
  e.finish = e.service_start + terms.tau_sense + terms.tau_tran_mean;
  e.expected_age = terms.expected_age;
  e.payment = payment;
  e.compensation = rules.q_frac * payment;
  e.expected_cost = s.econ.cost_weight * (w.move_cost * tau_move + w.delay_cost * e.expected_delay + terms.service_cost);

  if (rules.time_windows) {
    e.window_ok = e.finish <= t.t_end + kTimeEps;
    e.completion_prob = completion_prob(tau_move, depart, task);
  } else {
    e.window_ok = true;
    e.completion_prob = 1.0;
  }
  e.utility = expected_worker_gain({e.completion_prob, e.expected_cost, {payment, e.compensation}});
  e.covers_cost = payment >= e.expected_cost;
  e.utility_gate = risk_gate_worker_utility(e.utility, rules.u_min, rules.rho_utility);
  e.completion_gate = risk_gate_completion(e.completion_prob, rules.rho_completion);
  e.feasible = e.window_ok && e.covers_cost && (!rules.risk_gates || (e.utility_gate && e.completion_gate));
  return e;
}

StepEstimate PathModel::estimate(const PlanStart& from, std::size_t task, double payment,
                                 const PlanningRules& rules) const {
  const auto& t = scenario_->tasks[task];
  const auto& w = scenario_->workers[worker_];
  return estimate_moves(movement_slots(distance(from.loc, t.loc), w.speed), from.clock, task, payment, rules);
}

PathEstimate PathModel::evaluate(const PlanStart& start, std::span<const std::size_t> order,
                                 std::span<const double> prices, const PlanningRules& rules) const {
  PathEstimate out;
  PlanStart at = start;
  for (std::size_t task : order) {
    auto e = estimate(at, task, prices[task], rules);
    out.utility += e.utility;
    out.feasible = out.feasible && e.feasible;
    at = {scenario_->tasks[task].loc, e.finish};
    out.steps.push_back(e);
  }
  out.end = at;
  return out;
}

}  // namespace mcs
