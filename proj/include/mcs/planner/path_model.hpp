#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcs/core/types.hpp"
#include "mcs/stochastic/completion.hpp"

namespace mcs {

// Where and when a worker can start its next hop, in expectation.
struct PlanStart {
  Location loc;
  double clock = 0.0;
};

struct PlanningRules {
  bool risk_gates = true;
  bool time_windows = true;
  double u_min = 0.1;
  double rho_utility = 0.3;
  double rho_completion = 0.3;
  double q_frac = 0.5;

  static PlanningRules futures(const EconomicConfig& e);
  static PlanningRules spot(const EconomicConfig& e);
};

// Expected outcome of one hop of a worker's path.
struct StepEstimate {
  std::size_t task = 0;
  double depart = 0.0;
  int tau_move = 0;
  double expected_delay = 0.0;
  double arrival = 0.0;
  double service_start = 0.0;
  double wait = 0.0;
  double finish = 0.0;
  double completion_prob = 1.0;
  double expected_cost = 0.0;
  double expected_age = 1.0;
  double payment = 0.0;
  double compensation = 0.0;
  double utility = 0.0;  // expected worker utility gain of this hop

  bool window_ok = true;
  bool covers_cost = true;
  bool utility_gate = true;
  bool completion_gate = true;
  bool feasible = true;
};

struct PathEstimate {
  std::vector<StepEstimate> steps;
  double utility = 0.0;
  bool feasible = true;
  PlanStart end;
};

// Expected-value view of one worker against every task of a scenario. Caches
// delay distributions, so an instance must not be shared between threads.
class PathModel {
 public:
  PathModel(const Scenario& s, std::size_t worker);

  std::size_t worker() const { return worker_; }
  const Scenario& scenario() const { return *scenario_; }

  StepEstimate estimate(const PlanStart& from, std::size_t task, double payment, const PlanningRules& rules) const;
  StepEstimate estimate_moves(int tau_move, double depart, std::size_t task, double payment,
                              const PlanningRules& rules) const;

  // Walks `order` hop by hop; prices are indexed by task.
  PathEstimate evaluate(const PlanStart& start, std::span<const std::size_t> order, std::span<const double> prices,
                        const PlanningRules& rules) const;

  double completion_prob(int tau_move, double depart, std::size_t task) const;
  double expected_age(std::size_t task) const { return per_task_[task].expected_age; }
  int sensing_slots(std::size_t task) const { return per_task_[task].tau_sense; }
  int expected_transmission_slots(std::size_t task) const { return per_task_[task].tau_tran_mean; }

 private:
  struct TaskTerms {
    int tau_sense = 0;
    int tau_tran_mean = 0;
    double expected_age = 1.0;
    double service_cost = 0.0;  // sensing + transmission at the mean channel
    DelayModel delay;
    std::vector<std::pair<int, double>> tran_hist;
  };

  const DelayDistribution& delay_distribution(std::size_t task, int tau_move) const;

  const Scenario* scenario_;
  std::size_t worker_;
  std::vector<TaskTerms> per_task_;
  mutable std::vector<std::unordered_map<int, DelayDistribution>> delay_cache_;
};

}  // namespace mcs
