#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "mcs/core/generator.hpp"
#include "mcs/planner/aco.hpp"
#include "mcs/planner/path_model.hpp"
#include "support.hpp"

using namespace mcs;

namespace {

std::vector<double> prices_of(const Scenario& s, std::size_t w) {
  std::vector<double> p(s.tasks.size());
  for (std::size_t t = 0; t < s.tasks.size(); ++t) p[t] = s.econ.p_desire(w, t);
  return p;
}

std::vector<std::size_t> all_tasks(const Scenario& s) {
  std::vector<std::size_t> v(s.tasks.size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Best total expected utility over every ordered feasible sequence.
double brute_best(const PathModel& model, const PlanStart& start, const std::vector<std::size_t>& tasks,
                  const std::vector<double>& prices, const PlanningRules& rules) {
  double best = 0.0;
  std::vector<bool> used(tasks.size(), false);
  std::function<void(PlanStart, double)> go = [&](PlanStart at, double acc) {
    best = std::max(best, acc);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (used[k]) continue;
      const auto e = model.estimate(at, tasks[k], prices[tasks[k]], rules);
      if (!e.feasible) continue;
      used[k] = true;
      go({model.scenario().tasks[tasks[k]].loc, e.finish}, acc + e.utility);
      used[k] = false;
    }
  };
  go(start, 0.0);
  return best;
}

}  // namespace

TEST_CASE("feasible set") {
  Scenario s = test::tiny_scenario(3, 1);
  const PathModel model(s, 0);
  const auto prices = prices_of(s, 0);
  const auto rules = PlanningRules::futures(s.econ);
  const auto tasks = all_tasks(s);

  SUBCASE("nothing left") {
    const auto g = build_task_graph(model, {s.workers[0].start, 0.0}, std::vector<std::size_t>{});
    CHECK(feasible_set(start_run(g), g, model, prices, rules).empty());
  }
  SUBCASE("closed windows are excluded") {
    s.tasks[1].t_end = 5;  // 14 slots of travel
    const PathModel m2(s, 0);
    const auto g = build_task_graph(m2, {s.workers[0].start, 0.0}, tasks);
    auto f = feasible_set(start_run(g), g, m2, prices, rules);
    CHECK(f.size() == 2);
    for (const auto& c : f) CHECK(g.tasks[c.vertex - 1] != 1);
  }
  SUBCASE("a task inside its window can still fail the completion gate") {
    // Task 0: 7 movement slots, then 1 sensing and 3 transmission slots. With
    // a = 0.2 and 3-slot delays the expected finish is 15.2 <= 16, but only
    // one delay fits, so Pr = 0.8^7 + 7 * 0.2 * 0.8^6 < 0.7.
    s.tasks[0].t_end = 16;
    s.uncertainty.delay_prob(0, 0) = 0.2;
    s.uncertainty.t_min = 3;
    s.uncertainty.t_max = 3;
    const PathModel m2(s, 0);
    const double pr = m2.completion_prob(7, 0.0, 0);
    CHECK(pr == doctest::Approx(std::pow(0.8, 7) + 7 * 0.2 * std::pow(0.8, 6)));
    const auto e = m2.estimate({s.workers[0].start, 0.0}, 0, prices[0], rules);
    CHECK(e.window_ok);
    CHECK_FALSE(e.completion_gate);
    auto no_gate = rules;
    no_gate.risk_gates = false;
    const auto g = build_task_graph(m2, {s.workers[0].start, 0.0}, tasks);
    auto gated = feasible_set(start_run(g), g, m2, prices, rules);
    CHECK(std::none_of(gated.begin(), gated.end(), [&](const Candidate& c) { return g.tasks[c.vertex - 1] == 0; }));
    auto open = feasible_set(start_run(g), g, m2, prices, no_gate);
    CHECK(std::any_of(open.begin(), open.end(), [&](const Candidate& c) { return g.tasks[c.vertex - 1] == 0; }));
  }
}

TEST_CASE("transition probabilities") {
  Scenario s = test::tiny_scenario(4, 1);
  const PathModel model(s, 0);
  const auto prices = prices_of(s, 0);
  const auto rules = PlanningRules::futures(s.econ);
  AcoConfig cfg;

  SUBCASE("a single choice is certain") {
    const auto g = build_task_graph(model, {s.workers[0].start, 0.0}, std::vector<std::size_t>{2});
    const auto run = start_run(g);
    const auto f = feasible_set(run, g, model, prices, rules);
    REQUIRE(f.size() == 1);
    Pheromone ph(g.vertices(), 1.0, 1e-6);
    CHECK(transition_probabilities(run, f, g, ph, cfg)[0] == 1.0);
  }
  SUBCASE("identical options split evenly") {
    s.tasks[1].loc = {0.0, 2000.0};
    s.tasks[0].loc = {2000.0, 0.0};
    const PathModel m2(s, 0);
    const auto g = build_task_graph(m2, {s.workers[0].start, 0.0}, std::vector<std::size_t>{0, 1});
    const auto run = start_run(g);
    const auto f = feasible_set(run, g, m2, prices, rules);
    REQUIRE(f.size() == 2);
    Pheromone ph(g.vertices(), 1.0, 1e-6);
    const auto p = transition_probabilities(run, f, g, ph, cfg);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
  }
  SUBCASE("distributions are normalized") {
    SeededRng rng(4);
    for (int i = 0; i < 50; ++i) {
      const Scenario r = generate_scenario(GenConfig::defaults(), 100 + i);
      const PathModel m(r, 0);
      const auto g = build_task_graph(m, {r.workers[0].start, 0.0}, all_tasks(r));
      const auto run = start_run(g);
      const auto f = feasible_set(run, g, m, prices_of(r, 0), PlanningRules::futures(r.econ));
      if (f.empty()) continue;
      Pheromone ph(g.vertices(), 1.0, 1e-6);
      for (std::size_t a = 0; a < g.vertices(); ++a)
        for (std::size_t b = 0; b < g.vertices(); ++b) ph(a, b) = rng.uniform(0.01, 5.0);
      const auto p = transition_probabilities(run, f, g, ph, cfg);
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      CHECK(std::abs(total - 1.0) < 1e-12);
      for (double x : p) CHECK(x >= 0.0);
    }
  }
  SUBCASE("an empty set is a caller error") {
    const auto g = build_task_graph(model, {s.workers[0].start, 0.0}, std::vector<std::size_t>{});
    Pheromone ph(1, 1.0, 1e-6);
    CHECK_THROWS(transition_probabilities(start_run(g), std::vector<Candidate>{}, g, ph, cfg));
  }
}

TEST_CASE("pheromone update") {
  AntRun best;
  best.vertices = {2, 1};
  best.utility = 2.0;
  SUBCASE("deposit on the best path") {
    Pheromone ph(3, 1.0, 1e-6);
    update_pheromone(ph, best, 0.5);
    CHECK(ph(0, 2) == doctest::Approx(2.5));
    CHECK(ph(2, 1) == doctest::Approx(2.5));
    CHECK(ph(0, 1) == doctest::Approx(0.5));
  }
  SUBCASE("full evaporation leaves the floor off the path") {
    Pheromone ph(3, 1.0, 1e-6);
    update_pheromone(ph, best, 1.0);
    CHECK(ph(0, 1) == 1e-6);
    CHECK(ph(1, 2) == 1e-6);
  }
  SUBCASE("no evaporation keeps off-path values") {
    Pheromone ph(3, 1.0, 1e-6);
    ph(1, 0) = 0.3;
    update_pheromone(ph, best, 0.0);
    CHECK(ph(1, 0) == 0.3);
    CHECK(ph(0, 1) == 1.0);
  }
}

TEST_CASE("ACO trivial inputs") {
  Scenario s = test::tiny_scenario(1, 1);
  const PathModel model(s, 0);
  const auto prices = prices_of(s, 0);
  const auto rules = PlanningRules::futures(s.econ);
  AcoConfig cfg;
  cfg.iter_max = 5;
  CHECK(run_aco(model, {s.workers[0].start, 0.0}, std::vector<std::size_t>{}, prices, rules, cfg, 1).path.empty());
  const auto one = run_aco(model, {s.workers[0].start, 0.0}, all_tasks(s), prices, rules, cfg, 1);
  REQUIRE(one.path.size() == 1);
  CHECK(one.path[0].task == 0);
}

TEST_CASE("ACO finds the exhaustive optimum on small instances") {
  AcoConfig cfg;
  cfg.iter_max = 200;
  cfg.ants = 20;
  int hits = 0, trials = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GenConfig g;
    g.n_tasks = 5;
    g.n_workers = 1;
    g.region_width = g.region_height = 3000.0;
    const Scenario s = generate_scenario(g, seed);
    const PathModel model(s, 0);
    const auto prices = prices_of(s, 0);
    const auto rules = PlanningRules::futures(s.econ);
    const PlanStart start{s.workers[0].start, 0.0};
    const auto res = run_aco(model, start, all_tasks(s), prices, rules, cfg, seed);
    const double best = brute_best(model, start, all_tasks(s), prices, rules);
    ++trials;
    if (std::abs(res.utility - best) <= 1e-9) ++hits;
    CHECK(res.utility <= best + 1e-9);
    // Every step of the returned path is feasible in expectation.
    for (const auto& st : res.path) {
      CHECK(st.feasible);
      CHECK(st.finish <= s.tasks[st.task].t_end + 1e-9);
    }
    for (std::size_t i = 1; i < res.best_by_iteration.size(); ++i)
      CHECK(res.best_by_iteration[i] >= res.best_by_iteration[i - 1]);
  }
  CHECK(hits >= trials - 1);
}

TEST_CASE("ACO is deterministic in its seed") {
  const Scenario s = generate_scenario(GenConfig::defaults(), 21);
  const PathModel model(s, 3);
  const auto prices = prices_of(s, 3);
  const auto rules = PlanningRules::futures(s.econ);
  AcoConfig cfg;
  cfg.iter_max = 30;
  const auto a = run_aco(model, {s.workers[3].start, 0.0}, all_tasks(s), prices, rules, cfg, 8);
  const auto b = run_aco(model, {s.workers[3].start, 0.0}, all_tasks(s), prices, rules, cfg, 8);
  CHECK(a.order() == b.order());
  CHECK(a.utility == b.utility);
}

TEST_CASE("verbatim distance heuristic favours far tasks") {
  Scenario s = test::tiny_scenario(2, 1);
  s.tasks[1].loc = {4000.0, 0.0};
  const PathModel model(s, 0);
  const auto g = build_task_graph(model, {s.workers[0].start, 0.0}, std::vector<std::size_t>{0, 1});
  const auto run = start_run(g);
  const auto f = feasible_set(run, g, model, prices_of(s, 0), PlanningRules::futures(s.econ));
  REQUIRE(f.size() == 2);
  Pheromone ph(g.vertices(), 1.0, 1e-6);
  AcoConfig inverse;
  AcoConfig verbatim;
  verbatim.inverse_distance_heuristic = false;
  const auto pi = transition_probabilities(run, f, g, ph, inverse);
  const auto pv = transition_probabilities(run, f, g, ph, verbatim);
  CHECK(pi[0] > pi[1]);
  CHECK(pv[1] > pv[0]);
}

TEST_CASE("invalid ACO settings are rejected") {
  AcoConfig c;
  c.theta = 1.0;
  CHECK_THROWS(c.validate());
  c = AcoConfig{};
  c.ants = 0;
  CHECK_THROWS(c.validate());
}
