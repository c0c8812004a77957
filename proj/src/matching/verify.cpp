#include "mcs/matching/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mcs/core/errors.hpp"
#include "mcs/matching/knapsack.hpp"
#include "mcs/stochastic/risk.hpp"

namespace mcs {

namespace {

double tol(double a, double b) { return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }
bool gt(double a, double b) { return a > b + tol(a, b); }

long ticks_up(double x, double tick) { return static_cast<long>(std::ceil(x / tick - 1e-7)); }
long ticks_down(double x, double tick) { return static_cast<long>(std::floor(x / tick + 1e-7)); }

bool open_for_trade(const Matching& m, std::size_t t) {
  return m.task_in_market[t] && m.status[t] != TaskStatus::withdrawn;
}

// Best feasible ordering found for each subset (bitmask over `tasks`).
struct SubsetBest {
  bool found = false;
  double utility = 0.0;
  std::vector<StepEstimate> steps;
};

std::vector<SubsetBest> best_orderings(const PathModel& model, const PlanStart& start,
                                       const std::vector<std::size_t>& tasks, std::span<const double> prices,
                                       const PlanningRules& rules) {
  std::vector<SubsetBest> best(std::size_t{1} << tasks.size());
  const auto& s = model.scenario();
  std::vector<StepEstimate> trail;
  std::function<void(unsigned, PlanStart, double)> dfs = [&](unsigned mask, PlanStart at, double u) {
    auto& slot = best[mask];
    if (!slot.found || gt(u, slot.utility)) {
      slot.found = true;
      slot.utility = u;
      slot.steps = trail;
    }
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      unsigned bit = 1u << k;
      if (mask & bit) continue;
      auto e = model.estimate(at, tasks[k], prices[tasks[k]], rules);
      if (!e.feasible) continue;
      trail.push_back(e);
      dfs(mask | bit, {s.tasks[tasks[k]].loc, e.finish}, u + e.utility);
      trail.pop_back();
    }
  };
  dfs(0, start, 0.0);
  return best;
}

struct TaskView {
  double utility = 0.0;
  std::map<std::size_t, double> gain;  // per worker
  std::map<std::size_t, double> price;
};

TaskView current_task_view(const Matching& m, const Scenario& s, std::size_t t,
                           const std::map<std::pair<std::size_t, std::size_t>, PairExpectation>& pairs) {
  TaskView v;
  for (std::size_t w : m.task_workers[t]) {
    const auto& term = *m.contract(t, w);
    const auto& pe = pairs.at({t, w});
    double g = task_gain(s, pe.completion_prob, pe.expected_age, term);
    v.gain[w] = g;
    v.price[w] = term.payment;
    v.utility += g;
  }
  return v;
}

}  // namespace

std::string Coalition::describe(const Scenario& s) const {
  std::ostringstream os;
  os << "type-" << type << " coalition: worker " << s.workers[worker].id << " with tasks {";
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    os << (k ? ", " : "") << s.tasks[tasks[k]].id;
    if (!evictions[k].empty()) {
      os << " evicting [";
      for (std::size_t e = 0; e < evictions[k].size(); ++e) os << (e ? ", " : "") << s.workers[evictions[k][e]].id;
      os << "]";
    }
  }
  os << "}, worker utility " << worker_utility_before << " -> " << worker_utility_after;
  return os.str();
}

std::vector<Coalition> find_blocking_coalitions(const Matching& m, const Scenario& s, const CoalitionLimits& limits) {
  std::vector<std::size_t> tasks;
  for (std::size_t t = 0; t < s.tasks.size(); ++t)
    if (open_for_trade(m, t)) tasks.push_back(t);
  std::size_t n_workers = std::count(m.worker_in_market.begin(), m.worker_in_market.end(), true);
  if (tasks.size() > limits.max_tasks || n_workers > limits.max_workers)
    throw ContractViolation("instance too large for brute-force coalition search");

  const auto pairs = pair_expectations(m, s);
  std::vector<TaskView> views(s.tasks.size());
  for (std::size_t t : tasks) views[t] = current_task_view(m, s, t, pairs);

  std::vector<Coalition> found;
  for (std::size_t w = 0; w < s.workers.size(); ++w) {
    if (!m.worker_in_market[w]) continue;
    PathModel model(s, w);
    const auto prices = m.prices_of(w);
    const double u_now = matched_path(m, w, model).utility;
    unsigned current_mask = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k)
      if (std::find(m.worker_paths[w].begin(), m.worker_paths[w].end(), tasks[k]) != m.worker_paths[w].end())
        current_mask |= 1u << k;

    auto best = best_orderings(model, m.starts[w], tasks, prices, m.rules);
    for (unsigned mask = 1; mask < best.size(); ++mask) {
      if (mask == current_mask || !best[mask].found || !gt(best[mask].utility, u_now)) continue;

      Coalition c;
      c.type = 2;
      c.worker = w;
      c.worker_utility_before = u_now;
      c.worker_utility_after = best[mask].utility;
      bool all_gain = true;
      for (const auto& step : best[mask].steps) {
        const std::size_t t = step.task;
        const auto& view = views[t];
        const double new_gain = task_gain(s, step.completion_prob, step.expected_age, {step.payment, step.compensation});
        // Workers that may be evicted: everyone in phi(t) except w.
        std::vector<std::size_t> others;
        for (std::size_t o : m.task_workers[t])
          if (o != w) others.push_back(o);
        const long capacity = ticks_down(m.budgets[t], m.price_tick);

        bool ok = false;
        std::vector<std::size_t> eviction;
        const std::size_t max_k = std::min(limits.max_eviction, others.size());
        for (std::size_t k = 0; k <= max_k && !ok; ++k) {
          std::vector<bool> pick(others.size(), false);
          std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
          do {
            long spend = ticks_up(step.payment, m.price_tick);
            double u = new_gain;
            std::vector<std::size_t> evicted;
            for (std::size_t o = 0; o < others.size(); ++o) {
              if (pick[o]) {
                evicted.push_back(others[o]);
                continue;
              }
              spend += ticks_up(view.price.at(others[o]), m.price_tick);
              u += view.gain.at(others[o]);
            }
            if (spend <= capacity && gt(u, view.utility)) {
              ok = true;
              eviction = evicted;
              break;
            }
          } while (std::prev_permutation(pick.begin(), pick.end()));
        }
        if (!ok) {
          all_gain = false;
          break;
        }
        c.tasks.push_back(t);
        c.evictions.push_back(eviction);
        if (!eviction.empty()) c.type = 1;
      }
      if (all_gain) found.push_back(std::move(c));
    }
  }
  return found;
}

std::vector<Violation> check_individual_rationality(const Matching& m, const Scenario& s) {
  std::vector<Violation> out;
  const auto pairs = pair_expectations(m, s);
  for (std::size_t t = 0; t < s.tasks.size(); ++t) {
    if (m.task_workers[t].empty()) continue;
    double spend = 0.0;
    double quality = 0.0;
    for (std::size_t w : m.task_workers[t]) {
      spend += m.contract(t, w)->payment;
      quality += 1.0 / pairs.at({t, w}).expected_age;
    }
    if (spend > m.budgets[t] + 1e-9) {
      std::ostringstream os;
      os << "task " << s.tasks[t].id << " pays " << spend << " over budget " << m.budgets[t];
      out.push_back({"budget", os.str()});
    }
    if (m.quality_gate && !risk_gate_task_quality(quality, s.tasks[t].desired_quality, m.quality_rho)) {
      std::ostringstream os;
      os << "task " << s.tasks[t].id << " expected quality " << quality << " below gate for Q_D "
         << s.tasks[t].desired_quality;
      out.push_back({"quality-gate", os.str()});
    }
  }
  for (const auto& [key, pe] : pairs) {
    const auto [t, w] = key;
    const auto& term = *m.contract(t, w);
    std::ostringstream who;
    who << "worker " << s.workers[w].id << " on task " << s.tasks[t].id;
    if (term.payment < pe.expected_cost)
      out.push_back({"payment-below-cost", who.str() + ": p=" + std::to_string(term.payment) +
                                               " < E[c]=" + std::to_string(pe.expected_cost)});
    if (m.rules.time_windows && !pe.step.window_ok)
      out.push_back({"time-window", who.str() + ": expected finish after t_e"});
    if (m.rules.risk_gates) {
      if (!pe.step.utility_gate)
        out.push_back({"utility-gate", who.str() + ": E[U]=" + std::to_string(pe.worker_gain)});
      if (!pe.step.completion_gate)
        out.push_back({"completion-gate", who.str() + ": Pr=" + std::to_string(pe.completion_prob)});
    }
  }
  return out;
}

std::vector<Violation> check_competitive_equilibrium(const Matching& m, const Scenario& s) {
  std::vector<Violation> out;
  const auto pairs = pair_expectations(m, s);

  for (const auto& [key, pe] : pairs) {
    const auto [t, w] = key;
    if (m.contract(t, w)->payment < pe.expected_cost)
      out.push_back({"price-below-cost", "worker " + std::to_string(s.workers[w].id) + " on task " +
                                             std::to_string(s.tasks[t].id)});
  }

  for (std::size_t t = 0; t < s.tasks.size(); ++t) {
    if (!open_for_trade(m, t)) continue;
    const auto& props = m.final_proposals[t];
    std::vector<KnapsackItem> items;
    for (const auto& p : props) items.push_back({p.worker, s.workers[p.worker].id, p.price, p.task_gain});
    auto best = select_workers_knapsack(items, m.budgets[t], m.price_tick);
    double selected_gain = 0.0;
    std::size_t covered = 0;
    for (const auto& p : props)
      if (std::binary_search(m.task_workers[t].begin(), m.task_workers[t].end(), p.worker)) {
        selected_gain += p.task_gain;
        ++covered;
      }
    if (covered != m.task_workers[t].size() || gt(best.total_gain, selected_gain)) {
      std::ostringstream os;
      os << "task " << s.tasks[t].id << " selection gain " << selected_gain << " vs best " << best.total_gain;
      out.push_back({"selection-not-optimal", os.str()});
    }
  }

  for (std::size_t t = 0; t < s.tasks.size(); ++t) {
    if (!open_for_trade(m, t)) continue;
    long residual = ticks_down(m.budgets[t], m.price_tick);
    for (std::size_t w : m.task_workers[t]) residual -= ticks_up(m.contract(t, w)->payment, m.price_tick);
    for (std::size_t w = 0; w < s.workers.size(); ++w) {
      if (!m.worker_in_market[w]) continue;
      if (std::binary_search(m.task_workers[t].begin(), m.task_workers[t].end(), w)) continue;
      const double p = m.asked(w, t);
      if (ticks_up(p, m.price_tick) > residual) continue;
      PathModel model(s, w);
      const auto prices = m.prices_of(w);
      const double u_now = matched_path(m, w, model).utility;
      std::vector<std::size_t> subset = m.worker_paths[w];
      subset.push_back(t);
      auto best = best_orderings(model, m.starts[w], subset, prices, m.rules);
      const auto& full = best.back();
      if (full.found && gt(full.utility, u_now)) {
        std::ostringstream os;
        os << "task " << s.tasks[t].id << " can afford willing worker " << s.workers[w].id << " at " << p
           << " (worker utility " << u_now << " -> " << full.utility << ")";
        out.push_back({"affordable-willing-worker", os.str()});
      }
    }
  }
  return out;
}

double expected_task_utility_of(const Matching& m, const Scenario& s, std::size_t task) {
  const auto pairs = pair_expectations(m, s);
  return current_task_view(m, s, task, pairs).utility;
}

double expected_worker_utility_of(const Matching& m, const Scenario& s, std::size_t worker) {
  if (m.worker_paths[worker].empty()) return 0.0;
  PathModel model(s, worker);
  return matched_path(m, worker, model).utility;
}

double expected_social_welfare(const Matching& m, const Scenario& s) {
  const auto pairs = pair_expectations(m, s);
  double total = 0.0;
  for (const auto& [key, pe] : pairs) {
    const auto [t, w] = key;
    total += pe.worker_gain + task_gain(s, pe.completion_prob, pe.expected_age, *m.contract(t, w));
  }
  return total;
}

}  // namespace mcs
