#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mcs/core/types.hpp"
#include "mcs/economics/utility.hpp"
#include "mcs/planner/aco.hpp"
#include "mcs/planner/path_model.hpp"

namespace mcs {

struct MessageTally {
  std::size_t proposals = 0;      // worker -> owner
  std::size_t replies = 0;        // owner -> worker
  std::size_t price_updates = 0;  // worker -> owner

  std::size_t worker_sent() const { return proposals + price_updates; }
  std::size_t owner_sent() const { return replies; }
  std::size_t total() const { return worker_sent() + owner_sent(); }
  MessageTally& operator+=(const MessageTally& o);
};

// How a worker forms its proposals: one planned path over all candidate
// tasks, or an independent offer for every task reachable as the next hop.
enum class PlanMode { path, single_hop };

// Everything a round-based many-to-many market needs to run.
struct MarketSpec {
  const Scenario* scenario = nullptr;
  TradeStage stage = TradeStage::futures;
  std::vector<std::size_t> tasks;    // participating task indices
  std::vector<std::size_t> workers;  // participating worker indices
  std::vector<PlanStart> starts;     // by worker index
  std::vector<double> budgets;       // by task index
  PlanningRules rules;
  bool quality_gate = true;          // post-termination task quality gate
  double quality_rho = 0.3;
  PairTable<double> initial_prices;  // (worker, task)
  PairTable<int> barred;             // (worker, task) pairs kept out of the market; empty for none
  AcoConfig aco;
  PlanMode plan = PlanMode::path;
  // Optional per-worker models (indexed by worker) that outlive the market;
  // built fresh when null.
  const std::vector<PathModel>* models = nullptr;
  double dp = 0.5;
  double price_tick = 0.1;
  std::uint64_t seed = 0;
  int max_rounds = 10000;
};

enum class TaskStatus { absent, matched, withdrawn, unmatched };

struct Proposal {
  std::size_t worker = 0;
  double price = 0.0;
  double completion_prob = 1.0;
  double expected_age = 1.0;
  double expected_cost = 0.0;
  double worker_gain = 0.0;  // expected utility of this hop to the worker
  double task_gain = 0.0;    // marginal expected task utility
  bool accepted = false;
};

struct Matching {
  TradeStage stage = TradeStage::futures;
  std::vector<std::vector<std::size_t>> task_workers;  // phi(s), ascending worker index
  std::vector<std::vector<std::size_t>> worker_paths;  // phi(w), in travel order
  std::map<std::pair<std::size_t, std::size_t>, ContractTerm> contracts;  // key (task, worker)
  PairTable<double> asked;                               // final asked payments (worker, task)
  std::vector<TaskStatus> status;                        // by task
  std::vector<std::vector<Proposal>> final_proposals;    // by task, last round
  std::vector<bool> task_in_market;
  std::vector<bool> worker_in_market;
  std::vector<PlanStart> starts;
  std::vector<double> budgets;
  PlanningRules rules;
  bool quality_gate = true;
  double quality_rho = 0.3;
  double price_tick = 0.1;
  int rounds = 0;   // all rounds, including those after withdrawals
  int phases = 0;   // round loops started (1 + number of withdrawal restarts)
  bool converged = true;
  MessageTally messages;

  const ContractTerm* contract(std::size_t task, std::size_t worker) const;
  // Payment the worker would ask for `task` (contract price if matched).
  double price_for(std::size_t worker, std::size_t task) const;
  std::vector<double> prices_of(std::size_t worker) const;  // indexed by task
};

Matching empty_matching(const Scenario& s, TradeStage stage);

Matching run_market(const MarketSpec& spec);

// Expected hop-by-hop view of a worker's matched path at its contract prices.
PathEstimate matched_path(const Matching& m, std::size_t worker, const PathModel& model);

// Per-(task, worker) expected terms of every contract, from the workers' paths.
struct PairExpectation {
  double completion_prob = 1.0;
  double expected_cost = 0.0;
  double expected_age = 1.0;
  double worker_gain = 0.0;
  StepEstimate step;
};
std::map<std::pair<std::size_t, std::size_t>, PairExpectation> pair_expectations(const Matching& m,
                                                                                  const Scenario& s);

double task_gain(const Scenario& s, double completion_prob, double expected_age, const ContractTerm& term);

}  // namespace mcs
