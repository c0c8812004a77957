#include "mcs/matching/market.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/matching/knapsack.hpp"
#include "mcs/stochastic/risk.hpp"

namespace mcs {

MessageTally& MessageTally::operator+=(const MessageTally& o) {
  proposals += o.proposals;
  replies += o.replies;
  price_updates += o.price_updates;
  return *this;
}

const ContractTerm* Matching::contract(std::size_t task, std::size_t worker) const {
  auto it = contracts.find({task, worker});
  return it == contracts.end() ? nullptr : &it->second;
}

double Matching::price_for(std::size_t worker, std::size_t task) const {
  if (const auto* c = contract(task, worker)) return c->payment;
  return asked(worker, task);
}

std::vector<double> Matching::prices_of(std::size_t worker) const {
  std::vector<double> out(status.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = price_for(worker, t);
  return out;
}

Matching empty_matching(const Scenario& s, TradeStage stage) {
  Matching m;
  m.stage = stage;
  m.task_workers.assign(s.tasks.size(), {});
  m.worker_paths.assign(s.workers.size(), {});
  m.asked = s.econ.p_desire;
  m.status.assign(s.tasks.size(), TaskStatus::absent);
  m.final_proposals.assign(s.tasks.size(), {});
  m.task_in_market.assign(s.tasks.size(), false);
  m.worker_in_market.assign(s.workers.size(), false);
  m.starts.resize(s.workers.size());
  for (std::size_t w = 0; w < s.workers.size(); ++w) m.starts[w] = {s.workers[w].start, 0.0};
  m.budgets.resize(s.tasks.size());
  for (std::size_t t = 0; t < s.tasks.size(); ++t) m.budgets[t] = s.tasks[t].budget;
  m.rules = stage == TradeStage::futures ? PlanningRules::futures(s.econ) : PlanningRules::spot(s.econ);
  m.quality_rho = s.econ.rho[0];
  return m;
}

double task_gain(const Scenario& s, double completion_prob, double expected_age, const ContractTerm& term) {
  return expected_task_gain({completion_prob, expected_age, term}, s.econ.quality_weight, s.econ.settlement_weight);
}

namespace {

double snap(double p, double tick) { return std::round(p / tick) * tick; }

struct PlanCache {
  std::vector<double> key;
  AcoResult plan;
  bool valid = false;
};

}  // namespace

Matching run_market(const MarketSpec& spec) {
  if (spec.scenario == nullptr) throw ContractViolation("market without scenario");
  const Scenario& s = *spec.scenario;
  const std::size_t nt = s.tasks.size();

  Matching m = empty_matching(s, spec.stage);
  m.starts = spec.starts;
  m.budgets = spec.budgets;
  m.rules = spec.rules;
  m.quality_gate = spec.quality_gate;
  m.quality_rho = spec.quality_rho;
  m.price_tick = spec.price_tick;
  m.asked = spec.initial_prices;
  for (std::size_t t : spec.tasks) m.task_in_market[t] = true;
  for (std::size_t w : spec.workers) m.worker_in_market[w] = true;

  std::vector<bool> active = m.task_in_market;
  std::vector<PathModel> own;
  std::vector<const PathModel*> models;
  if (spec.models != nullptr) {
    if (spec.models->size() != s.workers.size()) throw ContractViolation("one path model per worker");
    for (std::size_t w : spec.workers) models.push_back(&(*spec.models)[w]);
  } else {
    own.reserve(spec.workers.size());
    for (std::size_t w : spec.workers) own.emplace_back(s, w);
    for (const auto& m : own) models.push_back(&m);
  }
  std::vector<PlanCache> cache(spec.workers.size());
  std::vector<AcoResult> plans(spec.workers.size());
  std::vector<std::vector<Proposal>> proposals(nt);

  bool restart = true;
  while (restart) {
    restart = false;
    ++m.phases;
    std::vector<std::size_t> candidates;
    for (std::size_t t = 0; t < nt; ++t)
      if (active[t]) candidates.push_back(t);

    while (true) {
      if (m.rounds >= spec.max_rounds) {
        m.converged = false;
        spdlog::warn("market stopped after {} rounds without converging", m.rounds);
        break;
      }
      ++m.rounds;

      for (auto& p : proposals) p.clear();
      for (std::size_t k = 0; k < spec.workers.size(); ++k) {
        const std::size_t w = spec.workers[k];
        std::vector<double> prices(nt);
        for (std::size_t t = 0; t < nt; ++t) prices[t] = m.asked(w, t);
        std::vector<std::size_t> mine;
        for (std::size_t t : candidates)
          if (spec.barred.workers() == 0 || spec.barred(w, t) == 0) mine.push_back(t);
        std::vector<double> key;
        key.reserve(mine.size() * 2);
        for (std::size_t t : mine) {
          key.push_back(static_cast<double>(t));
          key.push_back(prices[t]);
        }
        // A worker facing unchanged prices keeps its previous plan.
        if (!cache[k].valid || cache[k].key != key) {
          std::uint64_t seed = mix_seed(mix_seed(spec.seed, w), static_cast<std::uint64_t>(m.rounds));
          if (spec.plan == PlanMode::path) {
            cache[k].plan = run_aco(*models[k], spec.starts[w], mine, prices, spec.rules, spec.aco, seed);
          } else {
            cache[k].plan = {};
            for (std::size_t t : mine) {
              auto e = models[k]->estimate(spec.starts[w], t, prices[t], spec.rules);
              if (e.feasible) cache[k].plan.path.push_back(e);
            }
          }
          cache[k].key = std::move(key);
          cache[k].valid = true;
        }
        plans[k] = cache[k].plan;
        for (const auto& step : plans[k].path) {
          Proposal p;
          p.worker = w;
          p.price = step.payment;
          p.completion_prob = step.completion_prob;
          p.expected_age = step.expected_age;
          p.expected_cost = step.expected_cost;
          p.worker_gain = step.utility;
          p.task_gain = task_gain(s, step.completion_prob, step.expected_age, {step.payment, step.compensation});
          proposals[step.task].push_back(p);
          ++m.messages.proposals;
        }
      }

      for (std::size_t t = 0; t < nt; ++t) {
        auto& props = proposals[t];
        if (props.empty()) continue;
        std::sort(props.begin(), props.end(), [](const Proposal& a, const Proposal& b) { return a.worker < b.worker; });
        std::vector<KnapsackItem> items;
        for (const auto& p : props) items.push_back({p.worker, s.workers[p.worker].id, p.price, p.task_gain});
        auto choice = select_workers_knapsack(items, spec.budgets[t], spec.price_tick);
        for (std::size_t idx : choice.chosen) props[idx].accepted = true;
        m.messages.replies += props.size();
      }

      bool changed = false;
      for (std::size_t t = 0; t < nt; ++t)
        for (const auto& p : proposals[t]) {
          if (p.accepted) continue;
          // Rejected: lower the ask unless it already sits at the expected cost.
          if (!(p.price > p.expected_cost)) continue;
          if (spec.rules.risk_gates &&
              !risk_gate_worker_utility(p.worker_gain, spec.rules.u_min, spec.rules.rho_utility))
            continue;
          double next = p.price - spec.dp;
          next = next > p.expected_cost ? std::max(snap(next, spec.price_tick), p.expected_cost) : p.expected_cost;
          if (next < p.price) {
            m.asked(p.worker, t) = next;
            ++m.messages.price_updates;
            changed = true;
          }
        }
      spdlog::debug("market round {}: changed={}", m.rounds, changed);
      if (!changed) break;
    }

    if (spec.quality_gate) {
      for (std::size_t t = 0; t < nt; ++t) {
        if (!active[t]) continue;
        double q = 0.0;
        bool any = false;
        for (const auto& p : proposals[t])
          if (p.accepted) {
            q += 1.0 / p.expected_age;
            any = true;
          }
        if (any && !risk_gate_task_quality(q, s.tasks[t].desired_quality, spec.quality_rho)) {
          active[t] = false;
          m.status[t] = TaskStatus::withdrawn;
          restart = true;
        }
      }
      if (restart && !m.converged) restart = false;
    }
  }

  m.final_proposals = proposals;
  for (std::size_t k = 0; k < spec.workers.size(); ++k) {
    const std::size_t w = spec.workers[k];
    for (const auto& step : plans[k].path) {
      const std::size_t t = step.task;
      if (!active[t]) continue;
      bool accepted = false;
      for (const auto& p : proposals[t])
        if (p.worker == w && p.accepted) accepted = true;
      if (!accepted) continue;
      m.worker_paths[w].push_back(t);
      m.task_workers[t].push_back(w);
      m.contracts[{t, w}] = {step.payment, step.compensation, spec.stage};
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    std::sort(m.task_workers[t].begin(), m.task_workers[t].end());
    if (!m.task_in_market[t] || m.status[t] == TaskStatus::withdrawn) continue;
    m.status[t] = m.task_workers[t].empty() ? TaskStatus::unmatched : TaskStatus::matched;
  }
  return m;
}

PathEstimate matched_path(const Matching& m, std::size_t worker, const PathModel& model) {
  return model.evaluate(m.starts[worker], m.worker_paths[worker], m.prices_of(worker), m.rules);
}

std::map<std::pair<std::size_t, std::size_t>, PairExpectation> pair_expectations(const Matching& m,
                                                                                  const Scenario& s) {
  std::map<std::pair<std::size_t, std::size_t>, PairExpectation> out;
  for (std::size_t w = 0; w < s.workers.size(); ++w) {
    if (m.worker_paths[w].empty()) continue;
    PathModel model(s, w);
    auto path = matched_path(m, w, model);
    for (const auto& step : path.steps)
      out[{step.task, w}] = {step.completion_prob, step.expected_cost, step.expected_age, step.utility, step};
  }
  return out;
}

}  // namespace mcs
