#include "mcs/spot/environment.hpp"

#include <algorithm>
#include <cmath>

#include "mcs/core/errors.hpp"
#include "mcs/economics/aoi.hpp"
#include "mcs/stochastic/completion.hpp"
#include "mcs/stochastic/sampling.hpp"

namespace mcs {

namespace {

WorkerSettlement settlement_of(const PairRecord& p) {
  WorkerSettlement s;
  s.outcome.completed = p.completed();
  s.outcome.realized.total_cost = p.cost;
  s.outcome.partial_cost = p.completed() ? 0.0 : p.cost;
  s.term = p.term;
  s.term.compensation = p.compensation_owed();
  return s;
}

}  // namespace

double TransactionLog::worker_utility(std::size_t worker) const {
  std::vector<WorkerSettlement> mine;
  for (const auto& p : pairs)
    if (p.worker == worker) mine.push_back(settlement_of(p));
  return mcs::worker_utility(mine);
}

double TransactionLog::task_utility(std::size_t task, double quality_weight, double settlement_weight) const {
  std::vector<TaskSettlement> mine;
  for (const auto& p : pairs) {
    if (p.task != task || !p.counted()) continue;
    TaskSettlement s;
    s.completed = p.completed();
    s.average_age = p.completed() ? p.average_age : 1.0;
    s.term = p.term;
    s.term.compensation = p.compensation_owed();
    mine.push_back(s);
  }
  return mcs::task_utility(mine, quality_weight, settlement_weight);
}

Environment::Environment(const Scenario& s, std::uint64_t seed) : s_(&s) {
  SeededRng root(seed);
  const std::size_t nw = s.workers.size();
  const std::size_t nt = s.tasks.size();
  workers_.resize(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    workers_[w].loc = s.workers[w].start;
    delay_rng_.push_back(root.substream("delay").substream(w));
    channel_rng_.push_back(root.substream("channel").substream(w));
  }
  min_tran_.resize(nw * nt);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t t = 0; t < nt; ++t)
      min_tran_[w * nt + t] = transmission_slots(
          {s.tasks[t].data_bits, s.econ.bandwidth_hz, s.workers[w].transmit_power}, s.uncertainty.mu2);
  log_.initial_budget.resize(nt);
  log_.residual_budget.resize(nt);
  log_.budget_trajectory.resize(nt);
  log_.quality.assign(nt, 0.0);
  log_.worker_reward.assign(nw, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    log_.initial_budget[t] = s.tasks[t].budget;
    log_.residual_budget[t] = s.tasks[t].budget;
    log_.budget_trajectory[t].push_back(s.tasks[t].budget);
  }
}

std::size_t Environment::assign(std::size_t worker, std::size_t task, const ContractTerm& term, bool binding) {
  if (worker >= workers_.size() || task >= s_->tasks.size()) throw ContractViolation("assignment out of range");
  if (finalized_) throw ContractViolation("assignment after the transaction closed");
  PairRecord p;
  p.worker = worker;
  p.task = task;
  p.term = term;
  p.binding = binding;
  p.signed_at = t_;
  log_.pairs.push_back(p);
  log_.residual_budget[task] -= term.payment;
  const std::size_t idx = log_.pairs.size() - 1;
  workers_[worker].pending.push_back(idx);
  return idx;
}

void Environment::assign_matching(const Matching& m, bool binding) {
  for (std::size_t w = 0; w < m.worker_paths.size(); ++w)
    for (std::size_t t : m.worker_paths[w]) {
      const ContractTerm* c = m.contract(t, w);
      if (c == nullptr) throw ContractViolation("path task without a contract");
      assign(w, t, *c, binding);
    }
}

std::vector<std::size_t> Environment::release_unsigned(std::size_t worker) {
  auto& ws = workers_[worker];
  std::vector<std::size_t> out;
  auto release = [&](std::size_t idx) {
    auto& p = log_.pairs[idx];
    p.resolution = Resolution::released;
    p.resolved_at = t_;
    log_.residual_budget[p.task] += p.term.payment;
    out.push_back(p.task);
  };
  std::deque<std::size_t> keep;
  for (std::size_t idx : ws.pending) {
    if (log_.pairs[idx].binding)
      keep.push_back(idx);
    else
      release(idx);
  }
  ws.pending.swap(keep);
  if (ws.current && ws.phase != WorkerPhase::serving && ws.phase != WorkerPhase::delayed &&
      !log_.pairs[*ws.current].binding) {
    release(*ws.current);
    ws.current.reset();
    ws.phase = WorkerPhase::idle;
  }
  return out;
}

std::optional<std::size_t> Environment::target(std::size_t worker) const {
  const auto& ws = workers_[worker];
  if (!ws.current) return std::nullopt;
  return log_.pairs[*ws.current].task;
}

std::vector<std::size_t> Environment::queue(std::size_t worker) const {
  std::vector<std::size_t> out;
  for (std::size_t idx : workers_[worker].pending) out.push_back(log_.pairs[idx].task);
  return out;
}

int Environment::busy_until(std::size_t worker) const {
  const auto& ws = workers_[worker];
  return ws.phase == WorkerPhase::serving ? t_ + ws.service_left : t_;
}

AgentContext Environment::context(std::size_t worker) const {
  const auto& ws = workers_[worker];
  AgentContext c;
  c.loc = ws.loc;
  c.t = t_;
  c.remaining_path = ws.pending.size();
  if (ws.current) {
    const auto& p = log_.pairs[*ws.current];
    const auto& task = s_->tasks[p.task];
    c.has_target = true;
    c.target = p.task;
    c.slack = task.t_end - t_;
    c.compensation = p.binding ? p.term.compensation : 0.0;
    c.distance = distance(ws.loc, task.loc);
  }
  return c;
}

double Environment::take_reward(std::size_t worker) {
  double r = workers_[worker].reward;
  workers_[worker].reward = 0.0;
  return r;
}

std::vector<std::size_t> Environment::take_failed_tasks() {
  std::vector<std::size_t> out;
  out.swap(failed_tasks_);
  return out;
}

void Environment::begin_next(std::size_t w) {
  auto& ws = workers_[w];
  ws.current.reset();
  ws.phase = WorkerPhase::idle;
  if (ws.pending.empty()) return;
  ws.current = ws.pending.front();
  ws.pending.pop_front();
  const auto& task = s_->tasks[log_.pairs[*ws.current].task];
  ws.from = ws.loc;
  ws.leg = distance(ws.loc, task.loc);
  ws.move_slots = movement_slots(ws.leg, s_->workers[w].speed);
  ws.moved = 0;
  ws.trial_done = false;
  ws.delay_left = 0;
  ws.phase = ws.move_slots > 0 ? WorkerPhase::moving : WorkerPhase::waiting;
}

bool Environment::hopeless(std::size_t w) const {
  const auto& ws = workers_[w];
  if (!ws.current || ws.phase == WorkerPhase::serving) return false;
  const auto& p = log_.pairs[*ws.current];
  const auto& task = s_->tasks[p.task];
  const int earliest = t_ + ws.delay_left + (ws.move_slots - ws.moved);
  const int start = std::max(earliest, task.t_begin);
  const int fastest = sensing_slots(s_->workers[w], task) + min_tran_[w * s_->tasks.size() + p.task];
  return start + fastest > task.t_end;
}

void Environment::credit(std::size_t w, double r) {
  workers_[w].reward += r;
  log_.worker_reward[w] += r;
}

void Environment::charge(std::size_t w, double raw_cost, RewardCase c) {
  auto& p = log_.pairs[*workers_[w].current];
  p.cost += s_->econ.cost_weight * raw_cost;
  credit(w, reward(c, raw_cost, s_->econ.cost_weight));
}

void Environment::settle_failure(PairRecord& p) {
  log_.residual_budget[p.task] += p.term.payment;
  const double q = p.compensation_owed();
  log_.residual_budget[p.task] += q;
  log_.collected += q;
  credit(p.worker, reward(RewardCase::abandon, q, s_->econ.cost_weight));
  failed_tasks_.push_back(p.task);
}

void Environment::fail(std::size_t w, Resolution why) {
  auto& ws = workers_[w];
  auto& p = log_.pairs[*ws.current];
  p.resolution = why;
  p.resolved_at = t_;
  settle_failure(p);
  ws.current.reset();
  ws.phase = WorkerPhase::idle;
  ws.delay_left = 0;
}

void Environment::complete(std::size_t w, int at) {
  auto& ws = workers_[w];
  auto& p = log_.pairs[*ws.current];
  p.resolution = Resolution::completed;
  p.resolved_at = at;
  p.average_age = aoi(p.parts.tau_sense, p.parts.tau_tran).average;
  log_.paid += p.term.payment;
  log_.quality[p.task] += 1.0 / p.average_age;
  credit(w, reward(RewardCase::completion, p.term.payment, s_->econ.cost_weight));
  ws.current.reset();
  ws.phase = WorkerPhase::idle;
}

void Environment::slot(std::size_t w) {
  auto& ws = workers_[w];
  const auto& worker = s_->workers[w];
  bool asked = false;

  // Each pass either spends the slot or resolves the target without using
  // time, in which case the next queued target gets the slot.
  for (int guard = 0; guard < 1 << 20; ++guard) {
    if (!ws.current) {
      begin_next(w);
      if (!ws.current) return;
    }
    if (hopeless(w)) {
      fail(w, Resolution::timed_out);
      continue;
    }
    if (!asked && decide_ && ws.phase != WorkerPhase::serving) {
      asked = true;
      if (decide_(w, context(w)) == Action::abandon) {
        fail(w, Resolution::abandoned);
        continue;
      }
    }

    auto& p = log_.pairs[*ws.current];
    const auto& task = s_->tasks[p.task];

    if (ws.phase == WorkerPhase::moving && !ws.trial_done) {
      ws.trial_done = true;
      const auto draw = sample_delay(delay_rng_[w], s_->uncertainty.delay_prob(w, p.task), s_->uncertainty.t_min,
                                     s_->uncertainty.t_max);
      if (draw.occurred && draw.duration > 0) {
        ws.delay_left = draw.duration;
        ws.phase = WorkerPhase::delayed;
      }
    }

    switch (ws.phase) {
      case WorkerPhase::delayed:
        p.parts.tau_delay += 1;
        p.parts.c_delay += worker.delay_cost;
        charge(w, worker.delay_cost, RewardCase::en_route);
        if (--ws.delay_left == 0) ws.phase = WorkerPhase::moving;
        return;

      case WorkerPhase::moving: {
        p.parts.tau_move += 1;
        p.parts.c_move += worker.move_cost;
        charge(w, worker.move_cost, RewardCase::en_route);
        ws.moved += 1;
        ws.trial_done = false;
        if (ws.moved >= ws.move_slots) {
          ws.loc = task.loc;
          ws.phase = WorkerPhase::waiting;
        } else {
          const double f = std::min(1.0, ws.moved * worker.speed / ws.leg);
          ws.loc = {ws.from.lon + f * (task.loc.lon - ws.from.lon), ws.from.lat + f * (task.loc.lat - ws.from.lat)};
        }
        return;
      }

      case WorkerPhase::waiting: {
        if (t_ < task.t_begin) return;  // idle wait for the window to open
        const int gamma = sample_channel(channel_rng_[w], s_->uncertainty.mu1, s_->uncertainty.mu2);
        const auto st = service_times(worker, task, gamma, s_->econ.bandwidth_hz);
        if (t_ + st.tau_sense + st.tau_tran > task.t_end) {
          fail(w, Resolution::timed_out);
          continue;
        }
        p.parts.tau_sense = st.tau_sense;
        p.parts.tau_tran = st.tau_tran;
        ws.sense_left = st.tau_sense;
        ws.service_left = st.tau_sense + st.tau_tran;
        ws.phase = WorkerPhase::serving;
        if (ws.service_left == 0) {
          // Nothing to sense or send: delivered at once.
          complete(w, t_);
          continue;
        }
        [[fallthrough]];
      }

      case WorkerPhase::serving: {
        if (ws.sense_left > 0) {
          ws.sense_left -= 1;
          p.parts.c_sense += worker.sense_cost;
          charge(w, worker.sense_cost, RewardCase::service);
        } else {
          p.parts.c_tran += worker.transmit_power;
          charge(w, worker.transmit_power, RewardCase::service);
        }
        if (--ws.service_left == 0) complete(w, t_ + 1);
        return;
      }

      case WorkerPhase::idle:
        return;
    }
  }
  throw ContractViolation("worker slot did not settle");
}

void Environment::step() {
  if (finished()) return;
  if (hook_) hook_(*this);
  for (std::size_t w = 0; w < workers_.size(); ++w) slot(w);
  ++t_;
  for (std::size_t t = 0; t < s_->tasks.size(); ++t) log_.budget_trajectory[t].push_back(log_.residual_budget[t]);
  if (finished()) finalize();
}

const TransactionLog& Environment::run() {
  while (!finished()) step();
  finalize();
  return log_;
}

void Environment::finalize() {
  if (finalized_) return;
  finalized_ = true;
  for (std::size_t w = 0; w < workers_.size(); ++w) {
    auto& ws = workers_[w];
    if (ws.current) fail(w, Resolution::timed_out);
    while (!ws.pending.empty()) {
      ws.current = ws.pending.front();
      ws.pending.pop_front();
      fail(w, Resolution::timed_out);
    }
  }
  for (std::size_t t = 0; t < s_->tasks.size(); ++t) log_.budget_trajectory[t].back() = log_.residual_budget[t];
}

double conservation_error(const TransactionLog& log) {
  double spent = 0.0;
  for (std::size_t t = 0; t < log.initial_budget.size(); ++t) spent += log.initial_budget[t] - log.residual_budget[t];
  double paid = 0.0, collected = 0.0;
  for (const auto& p : log.pairs) {
    if (p.completed()) paid += p.term.payment;
    collected += p.compensation_owed();
  }
  return std::max({std::abs(spent - (paid - collected)), std::abs(paid - log.paid), std::abs(collected - log.collected)});
}

}  // namespace mcs
