#include "mcs/sim/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "mcs/planner/path_model.hpp"

namespace mcs {

namespace {

template <class Rank>
Matching select(const Scenario& s, Rank rank) {
  const std::size_t nt = s.tasks.size();
  const std::size_t nw = s.workers.size();
  Matching m = empty_matching(s, TradeStage::futures);
  for (const auto& w : s.workers) m.starts.push_back({w.start, 0.0});
  for (const auto& t : s.tasks) m.budgets.push_back(t.budget);
  m.quality_gate = false;
  m.rules = PlanningRules::futures(s.econ);
  for (std::size_t t = 0; t < nt; ++t) {
    m.task_in_market[t] = true;
    const std::vector<std::size_t> order = rank(t);
    double left = s.tasks[t].budget;
    for (std::size_t w : order) {
      m.messages.proposals += 1;
      m.messages.replies += 1;
      const double p = s.econ.p_desire(w, t);
      if (p > left) continue;
      left -= p;
      m.task_workers[t].push_back(w);
      m.worker_paths[w].push_back(t);
      m.contracts[{t, w}] = {p, 0.0, TradeStage::futures};
    }
    std::sort(m.task_workers[t].begin(), m.task_workers[t].end());
    m.status[t] = m.task_workers[t].empty() ? TaskStatus::unmatched : TaskStatus::matched;
  }
  for (std::size_t w = 0; w < nw; ++w) {
    m.worker_in_market[w] = true;
    order_by_deadline(s, m.worker_paths[w]);
  }
  m.rounds = 1;
  return m;
}

}  // namespace

void order_by_deadline(const Scenario& s, std::vector<std::size_t>& path) {
  std::sort(path.begin(), path.end(), [&](std::size_t a, std::size_t b) {
    if (s.tasks[a].t_end != s.tasks[b].t_end) return s.tasks[a].t_end < s.tasks[b].t_end;
    return a < b;
  });
}

Matching select_quality_p(const Scenario& s) {
  std::vector<PathModel> models;
  for (std::size_t w = 0; w < s.workers.size(); ++w) models.emplace_back(s, w);
  return select(s, [&](std::size_t t) {
    std::vector<std::size_t> order(s.workers.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return 1.0 / models[a].expected_age(t) > 1.0 / models[b].expected_age(t);
    });
    return order;
  });
}

Matching select_random_m(const Scenario& s, SeededRng& rng) {
  return select(s, [&](std::size_t) {
    std::vector<std::size_t> order(s.workers.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    return order;
  });
}

}  // namespace mcs
