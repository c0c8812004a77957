#include "mcs/planner/aco.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mcs/core/errors.hpp"
#include "mcs/economics/costs.hpp"

namespace mcs {

void AcoConfig::validate() const {
  if (!(eps1 > 0 && eps2 > 0 && eps3 > 0 && eps4 > 0)) throw ConfigError("ACO weights must be positive");
  if (ants < 1 || iter_max < 1) throw ConfigError("ACO needs at least one ant and one iteration");
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("evaporation must lie in (0,1)");
  if (!(tau0 > 0.0)) throw ConfigError("initial pheromone must be positive");
}

TaskGraph build_task_graph(const PathModel& model, const PlanStart& start, std::span<const std::size_t> tasks) {
  const auto& s = model.scenario();
  const auto& w = s.workers[model.worker()];
  TaskGraph g;
  g.start = start;
  g.tasks.assign(tasks.begin(), tasks.end());
  const std::size_t n = g.vertices();
  std::vector<Location> loc(n);
  loc[0] = start.loc;
  g.width.assign(n, 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    const auto& t = s.tasks[g.tasks[k - 1]];
    loc[k] = t.loc;
    g.width[k] = std::max(1, t.t_end - t.t_begin);
  }
  g.eta.assign(n * n, 0.0);
  g.tau_move.assign(n * n, 0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      double d = distance(loc[m], loc[k]);
      g.eta[m * n + k] = d;
      g.tau_move[m * n + k] = movement_slots(d, w.speed);
    }
  return g;
}

Pheromone::Pheromone(std::size_t vertices, double tau0, double floor)
    : n_(vertices), floor_(floor), tau_(vertices * vertices, tau0) {}

AntRun start_run(const TaskGraph& graph) {
  AntRun run;
  run.clock = graph.start.clock;
  run.visited.assign(graph.vertices(), false);
  run.visited[0] = true;
  return run;
}

std::vector<Candidate> feasible_set(const AntRun& run, const TaskGraph& graph, const PathModel& model,
                                    std::span<const double> prices, const PlanningRules& rules) {
  std::vector<Candidate> out;
  for (std::size_t v = 1; v < graph.vertices(); ++v) {
    if (run.visited[v]) continue;
    const std::size_t task = graph.tasks[v - 1];
    auto e = model.estimate_moves(graph.moves(run.current, v), run.clock, task, prices[task], rules);
    if (e.feasible) out.push_back({v, e});
  }
  return out;
}

std::vector<double> transition_probabilities(const AntRun& run, std::span<const Candidate> feasible,
                                             const TaskGraph& graph, const Pheromone& pheromone,
                                             const AcoConfig& cfg) {
  if (feasible.empty()) throw ContractViolation("transition over an empty feasible set");
  // Work in logs; the factors span many orders of magnitude.
  std::vector<double> logw(feasible.size());
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    const auto& c = feasible[k];
    double eta = std::max(graph.distance(run.current, c.vertex), 1.0);
    double heuristic = cfg.inverse_distance_heuristic ? 1.0 / eta : eta;
    double wait = std::max(c.estimate.wait, 1.0);
    logw[k] = cfg.eps1 * std::log(pheromone(run.current, c.vertex)) + cfg.eps2 * std::log(heuristic) -
              cfg.eps3 * std::log(graph.width[c.vertex]) - cfg.eps4 * std::log(wait);
  }
  double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& x : logw) {
    x = std::exp(x - top);
    total += x;
  }
  for (double& x : logw) x /= total;
  return logw;
}

void update_pheromone(Pheromone& pheromone, const AntRun& best, double theta) {
  const std::size_t n = pheromone.vertices();
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) pheromone(m, k) *= (1.0 - theta);
  std::size_t prev = 0;
  for (std::size_t v : best.vertices) {
    pheromone(prev, v) += best.utility;
    prev = v;
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) pheromone(m, k) = std::max(pheromone(m, k), pheromone.floor());
}

std::vector<std::size_t> AcoResult::order() const {
  std::vector<std::size_t> out;
  for (const auto& s : path) out.push_back(s.task);
  return out;
}

namespace {

void advance(AntRun& run, const Candidate& c) {
  run.vertices.push_back(c.vertex);
  run.steps.push_back(c.estimate);
  run.utility += c.estimate.utility;
  run.visited[c.vertex] = true;
  run.current = c.vertex;
  run.clock = c.estimate.finish;
}

// Ants retrace the same partial paths often. A hop estimate depends only on
// the two vertices and the departure clock, and the feasible set only on the
// position, the clock and the visited set, so one run remembers both.
class HopMemo {
 public:
  HopMemo(const TaskGraph& graph, const PathModel& model, std::span<const double> prices, const PlanningRules& rules)
      : graph_(graph), model_(model), prices_(prices), rules_(rules) {}

  const std::vector<Candidate>& feasible(const AntRun& run) {
    const std::size_t n = graph_.vertices();
    if (n > 64) {
      scratch_.clear();
      collect(run, scratch_);
      return scratch_;
    }
    std::uint64_t mask = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (run.visited[v]) mask |= std::uint64_t{1} << v;
    StateKey key{run.current, std::bit_cast<std::uint64_t>(run.clock), mask};
    auto it = states_.find(key);
    if (it == states_.end()) {
      std::vector<Candidate> out;
      collect(run, out);
      it = states_.emplace(key, std::move(out)).first;
    }
    return it->second;
  }

 private:
  struct HopKey {
    std::size_t edge;
    std::uint64_t clock;
    bool operator==(const HopKey&) const = default;
  };
  struct StateKey {
    std::size_t at;
    std::uint64_t clock;
    std::uint64_t visited;
    bool operator==(const StateKey&) const = default;
  };
  struct Hash {
    std::size_t operator()(const HopKey& k) const { return mix_seed(k.clock, k.edge); }
    std::size_t operator()(const StateKey& k) const { return mix_seed(mix_seed(k.clock, k.at), k.visited); }
  };

  const StepEstimate& hop(std::size_t from, std::size_t to, double clock) {
    HopKey key{from * graph_.vertices() + to, std::bit_cast<std::uint64_t>(clock)};
    auto it = hops_.find(key);
    if (it == hops_.end()) {
      const std::size_t task = graph_.tasks[to - 1];
      it = hops_.emplace(key, model_.estimate_moves(graph_.moves(from, to), clock, task, prices_[task], rules_)).first;
    }
    return it->second;
  }

  void collect(const AntRun& run, std::vector<Candidate>& out) {
    for (std::size_t v = 1; v < graph_.vertices(); ++v) {
      if (run.visited[v]) continue;
      const auto& e = hop(run.current, v, run.clock);
      if (e.feasible) out.push_back({v, e});
    }
  }

  const TaskGraph& graph_;
  const PathModel& model_;
  std::span<const double> prices_;
  const PlanningRules& rules_;
  std::unordered_map<HopKey, StepEstimate, Hash> hops_;
  std::unordered_map<StateKey, std::vector<Candidate>, Hash> states_;
  std::vector<Candidate> scratch_;
};

std::size_t pick(std::span<const double> probs, SeededRng& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

}  // namespace

AcoResult run_aco(const PathModel& model, const PlanStart& start, std::span<const std::size_t> tasks,
                  std::span<const double> prices, const PlanningRules& rules, const AcoConfig& cfg,
                  std::uint64_t seed) {
  cfg.validate();
  AcoResult result;
  if (tasks.empty()) return result;

  const TaskGraph graph = build_task_graph(model, start, tasks);
  Pheromone pheromone(graph.vertices(), cfg.tau0, cfg.tau_floor());
  SeededRng rng(seed);
  HopMemo memo(graph, model, prices, rules);

  AntRun best_overall = start_run(graph);
  bool have_best = false;
  result.best_by_iteration.reserve(cfg.iter_max);

  // Same weights as transition_probabilities, with the per-edge logs hoisted
  // out of the walk.
  const std::size_t n = graph.vertices();
  std::vector<double> log_static(n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t v = 1; v < n; ++v) {
      double eta = std::max(graph.distance(m, v), 1.0);
      double heuristic = cfg.inverse_distance_heuristic ? 1.0 / eta : eta;
      log_static[m * n + v] = cfg.eps2 * std::log(heuristic) - cfg.eps3 * std::log(graph.width[v]);
    }
  std::vector<double> log_tau(n * n, 0.0);
  std::vector<double> probs;

  for (int iter = 0; iter < cfg.iter_max; ++iter) {
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t v = 0; v < n; ++v) log_tau[m * n + v] = cfg.eps1 * std::log(pheromone(m, v));
    AntRun iter_best;
    bool have_iter_best = false;
    for (int k = 0; k < cfg.ants; ++k) {
      AntRun run = start_run(graph);
      while (true) {
        const auto& feasible = memo.feasible(run);
        if (feasible.empty()) break;
        probs.resize(feasible.size());
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < feasible.size(); ++k) {
          const std::size_t e = run.current * n + feasible[k].vertex;
          probs[k] = log_tau[e] + log_static[e] - cfg.eps4 * std::log(std::max(feasible[k].estimate.wait, 1.0));
          top = std::max(top, probs[k]);
        }
        double total = 0.0;
        for (double& x : probs) {
          x = std::exp(x - top);
          total += x;
        }
        for (double& x : probs) x /= total;
        advance(run, feasible[pick(probs, rng)]);
      }
      if (!have_iter_best || run.utility > iter_best.utility) {
        iter_best = std::move(run);
        have_iter_best = true;
      }
    }
    update_pheromone(pheromone, iter_best, cfg.theta);
    if (!have_best || iter_best.utility > best_overall.utility) {
      best_overall = iter_best;
      have_best = true;
    }
    result.best_by_iteration.push_back(best_overall.utility);
  }
  result.path = best_overall.steps;
  result.utility = best_overall.utility;
  return result;
}

}  // namespace mcs
