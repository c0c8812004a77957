#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "mcs/core/rng.hpp"
#include "mcs/core/types.hpp"
#include "mcs/economics/costs.hpp"
#include "mcs/economics/utility.hpp"
#include "mcs/matching/market.hpp"
#include "mcs/spot/agent.hpp"

namespace mcs {

enum class WorkerPhase { idle, moving, delayed, waiting, serving };

enum class Resolution {
  pending,
  completed,
  abandoned,  // the worker dropped it
  timed_out,  // it could no longer finish inside the window or the horizon
  released    // unsigned work given up without penalty
};

// One (worker, task) trade carried out during the transaction.
struct PairRecord {
  std::size_t worker = 0;
  std::size_t task = 0;
  ContractTerm term;
  bool binding = true;  // breach owes q
  int signed_at = 0;
  Resolution resolution = Resolution::pending;
  int resolved_at = -1;
  CostParts parts;          // unweighted, incurred while serving this pair
  double cost = 0.0;        // V1-weighted total of parts
  double average_age = 0.0;  // AGE of the delivered data, when completed

  bool completed() const { return resolution == Resolution::completed; }
  bool failed() const { return resolution == Resolution::abandoned || resolution == Resolution::timed_out; }
  bool counted() const { return resolution != Resolution::released; }
  double compensation_owed() const { return failed() && binding ? term.compensation : 0.0; }
};

struct TransactionLog {
  std::vector<PairRecord> pairs;
  std::vector<double> initial_budget;   // by task
  std::vector<double> residual_budget;  // by task, at the end
  std::vector<std::vector<double>> budget_trajectory;  // by task, residual at t = 0..T
  std::vector<double> quality;          // by task, sum of 1/AGE over completed pairs
  std::vector<double> worker_reward;    // by worker, sum of per-slot rewards
  double paid = 0.0;       // payments owners -> workers
  double collected = 0.0;  // compensations workers -> owners

  double worker_utility(std::size_t worker) const;
  double task_utility(std::size_t task, double quality_weight, double settlement_weight) const;
};

// Realized world: movement with per-slot delay trials, channel draws at
// service start, settlement of payments and compensations, and a per-slot
// reward stream for each worker.
class Environment {
 public:
  using Decide = std::function<Action(std::size_t worker, const AgentContext& ctx)>;
  using SlotHook = std::function<void(Environment& env)>;

  Environment(const Scenario& s, std::uint64_t seed);

  const Scenario& scenario() const { return *s_; }
  int t() const { return t_; }
  bool finished() const { return t_ >= s_->horizon; }

  // Queue a trade for the worker and commit its payment against the task's
  // residual budget. Returns the pair index.
  std::size_t assign(std::size_t worker, std::size_t task, const ContractTerm& term, bool binding);
  // Load every contract of a matching, in path order.
  void assign_matching(const Matching& m, bool binding);
  // Give up the worker's current target and queue without penalty; only for
  // non-binding work not being served. Returns the released tasks.
  std::vector<std::size_t> release_unsigned(std::size_t worker);

  void set_policy(Decide decide) { decide_ = std::move(decide); }
  void set_slot_hook(SlotHook hook) { hook_ = std::move(hook); }

  // Advance one timeslot: hook, then every worker in index order.
  void step();
  // Step to the horizon and settle whatever is left.
  const TransactionLog& run();
  // Fail every unresolved trade; idempotent.
  void finalize();

  const TransactionLog& log() const { return log_; }

  // Worker-facing queries.
  WorkerPhase phase(std::size_t worker) const { return workers_[worker].phase; }
  Location location(std::size_t worker) const { return workers_[worker].loc; }
  std::optional<std::size_t> target(std::size_t worker) const;
  std::vector<std::size_t> queue(std::size_t worker) const;  // pending tasks after the target
  int busy_until(std::size_t worker) const;  // when the current service ends, or t
  AgentContext context(std::size_t worker) const;
  double take_reward(std::size_t worker);  // reward accrued since the last call
  double residual_budget(std::size_t task) const { return log_.residual_budget[task]; }
  // Tasks whose trades failed since the last call, in order of failure.
  std::vector<std::size_t> take_failed_tasks();

 private:
  struct WorkerState {
    WorkerPhase phase = WorkerPhase::idle;
    Location loc;
    std::optional<std::size_t> current;  // pair index
    std::deque<std::size_t> pending;     // pair indices
    Location from;
    double leg = 0.0;            // meters of the current leg
    int move_slots = 0;          // movement slots the leg needs
    int moved = 0;               // movement slots done
    bool trial_done = false;     // delay trial drawn for the next movement slot
    int delay_left = 0;
    int service_left = 0;
    int sense_left = 0;
    double reward = 0.0;
  };

  void begin_next(std::size_t w);
  void slot(std::size_t w);
  bool hopeless(std::size_t w) const;
  void fail(std::size_t w, Resolution why);
  void complete(std::size_t w, int at);
  void credit(std::size_t w, double r);
  void charge(std::size_t w, double raw_cost, RewardCase c);
  void settle_failure(PairRecord& p);

  const Scenario* s_;
  std::vector<SeededRng> delay_rng_;    // by worker
  std::vector<SeededRng> channel_rng_;  // by worker
  int t_ = 0;
  bool finalized_ = false;
  std::vector<WorkerState> workers_;
  std::vector<int> min_tran_;  // (worker, task) fastest transmission, flattened
  TransactionLog log_;
  std::vector<std::size_t> failed_tasks_;
  Decide decide_;
  SlotHook hook_;
};

// Money identity: sum over tasks of (initial - residual) equals payments
// minus compensations. Returns the absolute discrepancy.
double conservation_error(const TransactionLog& log);

}  // namespace mcs
