// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mcs/core/generator.hpp"
#include "mcs/economics/aoi.hpp"
#include "mcs/matching/ft_m2m.hpp"
#include "mcs/matching/knapsack.hpp"
#include "mcs/matching/verify.hpp"
#include "mcs/planner/aco.hpp"
#include "mcs/planner/path_model.hpp"
#include "mcs/sim/mechanisms.hpp"
#include "mcs/sim/monte_carlo.hpp"
#include "mcs/sim/verify_suites.hpp"
#include "mcs/spot/episode.hpp"
#include "mcs/stochastic/completion.hpp"

using namespace mcs;

namespace {

// Tolerances and thresholds.
constexpr double kStabilitySeconds = 60.0;
constexpr int kStabilityInstances = 50;
constexpr int kReplications = 100;
constexpr int kSweepSeeds = 20;
constexpr int kCompletionConfigs = 20;
constexpr std::size_t kCompletionSamples = 100000;
constexpr double kCompletionTol = 0.01;
constexpr double kMassTol = 1e-9;
constexpr int kKnapsackInstances = 200;
constexpr int kAcoInstances = 50;
constexpr double kAcoHitRate = 0.95;
constexpr double kUtilityTol = 1e-9;
constexpr double kNiShare = 0.95;
constexpr double kComparisonSeconds = 600.0;
constexpr double kPotawShare = 0.90;
constexpr double kPotawMean = 0.30;
constexpr int kDqnEpisodes = 500;
constexpr int kDqnWindow = 50;
constexpr double kGradTol = 1e-4;
constexpr double kMoneyTol = 1e-9;
constexpr std::uint64_t kBaseSeed = 2024;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-26s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::size_t> all_tasks(const Scenario& s) {
  std::vector<std::size_t> v(s.tasks.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

std::vector<double> prices_of(const Scenario& s, std::size_t w) {
  std::vector<double> p(s.tasks.size());
  for (std::size_t t = 0; t < p.size(); ++t) p[t] = s.econ.p_desire(w, t);
  return p;
}

// 1 and 13 share the instance set.
void stability_and_equilibrium() {
  AcoConfig aco = MechanismConfig::aco_with_iterations(50);
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport st = run_suite(Suite::stability, kStabilityInstances, kBaseSeed, aco);
  const double secs = seconds_since(t0);
  report(1, "stability", st.passed() && secs <= kStabilitySeconds,
         fmt("%d instances, %zu checks, %zu blocking coalitions, %.1f s (limit %.0f s)", st.trials, st.checks,
             st.findings.size(), secs, kStabilitySeconds));

  const SuiteReport eq = run_suite(Suite::equilibrium, kStabilityInstances, kBaseSeed, aco);
  report(13, "competitive equilibrium", eq.passed(),
         fmt("%d instances, %zu checks, %zu violations", eq.trials, eq.checks, eq.findings.size()));
}

void payment_sweep() {
  const double steps[3] = {0.1, 0.5, 1.0};
  double rounds[3] = {0, 0, 0}, task_u[3] = {0, 0, 0}, worker_u[3] = {0, 0, 0};
  const AcoConfig aco = MechanismConfig::aco_with_iterations(50);
  for (int k = 0; k < kSweepSeeds; ++k) {
    const std::uint64_t seed = replication_seed(kBaseSeed + 1, k);
    Scenario s = generate_scenario(GenConfig::defaults(), seed);
    for (int i = 0; i < 3; ++i) {
      s.econ.dp = steps[i];
      const Matching m = run_ft_m2m(s, aco, seed);
      rounds[i] += m.rounds;
      for (std::size_t t = 0; t < s.tasks.size(); ++t) task_u[i] += expected_task_utility_of(m, s, t);
      for (std::size_t w = 0; w < s.workers.size(); ++w) worker_u[i] += expected_worker_utility_of(m, s, w);
    }
  }
  for (int i = 0; i < 3; ++i) {
    rounds[i] /= kSweepSeeds;
    task_u[i] /= kSweepSeeds;
    worker_u[i] /= kSweepSeeds;
  }
  const bool ok = rounds[0] >= rounds[1] && rounds[1] >= rounds[2] && task_u[0] <= task_u[1] &&
                  task_u[1] <= task_u[2] && worker_u[0] >= worker_u[1] && worker_u[1] >= worker_u[2];
  report(4, "payment step sweep", ok,
         fmt("dp 0.1/0.5/1.0 over %d seeds: rounds %.1f/%.1f/%.1f, task utility %.2f/%.2f/%.2f, "
             "worker utility %.2f/%.2f/%.2f",
             kSweepSeeds, rounds[0], rounds[1], rounds[2], task_u[0], task_u[1], task_u[2], worker_u[0], worker_u[1],
             worker_u[2]));
}

// Direct simulation of one completion trial, written against the timing rule
// rather than the library's scenario enumeration.
double sampled_completion(const CompletionModel& m, const DelayModel& d, const ChannelModel& c, SeededRng& rng) {
  std::size_t done = 0;
  for (std::size_t i = 0; i < kCompletionSamples; ++i) {
    int delay = 0;
    for (int slot = 0; slot < m.tau_move; ++slot)
      if (rng.uniform01() < d.a) delay += rng.uniform_int(d.t_min, d.t_max);
    const int gamma = rng.uniform_int(c.mu1, c.mu2);
    const double rate = m.tx.bandwidth_hz * std::log2(1.0 + m.tx.transmit_power * gamma);
    const int tran = m.tx.data_bits <= 0.0 ? 0 : static_cast<int>(std::ceil(m.tx.data_bits / rate));
    const double arrive = std::max<double>(m.tau_move + delay, m.open_offset);
    if (arrive + m.tau_sense + tran <= m.deadline_slack) ++done;
  }
  return static_cast<double>(done) / static_cast<double>(kCompletionSamples);
}

void completion_oracle() {
  SeededRng rng(kBaseSeed + 2);
  double worst = 0.0, worst_mass = 0.0;
  for (int k = 0; k < kCompletionConfigs; ++k) {
    CompletionModel m;
    m.tau_move = rng.uniform_int(0, 6);
    m.tau_sense = rng.uniform_int(0, 3);
    m.deadline_slack = m.tau_move + m.tau_sense + rng.uniform_int(1, 12);
    m.tx = {rng.uniform(1e6, 4e6), 1e6, rng.uniform(0.4, 0.6)};
    const DelayModel delay{rng.uniform(0.0, 0.4), 1, rng.uniform_int(1, 4)};
    const ChannelModel channel{rng.uniform_int(1, 5), rng.uniform_int(6, 40)};
    const double exact = completion_probability(m, delay, channel, Enumerate{});
    const double sampled = sampled_completion(m, delay, channel, rng);
    double mass = 0.0;
    for_each_tcs(m, delay, channel, [&](const Tcs&, double w) { mass += w; });
    worst = std::max(worst, std::abs(exact - sampled));
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  report(5, "completion probability", worst <= kCompletionTol && worst_mass <= kMassTol,
         fmt("%d configs, %zu samples each: max |enum - sampled| %.4f (tol %.2f), max |mass - 1| %.1e (tol %.0e)",
             kCompletionConfigs, kCompletionSamples, worst, kCompletionTol, worst_mass, kMassTol));
}

void knapsack_oracle() {
  SeededRng rng(kBaseSeed + 3);
  int equal = 0;
  for (int k = 0; k < kKnapsackInstances; ++k) {
    const int n = rng.uniform_int(0, 12);
    std::vector<KnapsackItem> items;
    std::vector<long> ticks;
    for (int i = 0; i < n; ++i) {
      const long price = rng.uniform_int(5, 120);
      ticks.push_back(price);
      // Gains on a 1/64 grid add up exactly in any order.
      items.push_back({static_cast<std::size_t>(i), i, price / 10.0, rng.uniform_int(-64, 384) / 64.0});
    }
    const long cap = rng.uniform_int(0, 400);
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      long w = 0;
      double g = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1u) {
          w += ticks[i];
          g += items[i].gain;
        }
      if (w <= cap) best = std::max(best, g);
    }
    const auto choice = select_workers_knapsack(items, cap / 10.0, 0.1);
    if (choice.total_gain == best && choice.total_price <= cap / 10.0 + 1e-9) ++equal;
  }
  report(6, "knapsack", equal == kKnapsackInstances,
         fmt("%d/%d instances match the subset optimum", equal, kKnapsackInstances));
}

void age_closed_form() {
  int checked = 0, wrong = 0;
  for (int n = 0; n <= 100; ++n)
    for (int sense = 0; sense <= n; ++sense) {
      double sum = 0.0;
      for (int t = 0; t <= n; ++t) sum += t;
      // With nothing to sense or send the data is half a slot old on average.
      const double mean = n == 0 ? 0.5 : sum / n;
      const Aoi a = aoi(sense, n - sense);
      ++checked;
      if (a.age != sum || a.average != mean) ++wrong;
    }
  report(7, "age closed form", wrong == 0, fmt("%d splits with sense + transmit in [0, 100], %d mismatches", checked, wrong));
}

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

void aco_optimality() {
  AcoConfig cfg;
  cfg.iter_max = 200;
  cfg.ants = 20;
  int hits = 0;
  for (int k = 0; k < kAcoInstances; ++k) {
    const std::uint64_t seed = replication_seed(kBaseSeed + 4, k);
    GenConfig g = GenConfig::defaults();
    g.n_tasks = 6;
    g.n_workers = 1;
    g.region_width = g.region_height = 3000.0;
    const Scenario s = generate_scenario(g, seed);
    const PathModel model(s, 0);
    const auto prices = prices_of(s, 0);
    const auto rules = PlanningRules::futures(s.econ);
    const PlanStart start{s.workers[0].start, 0.0};
    const auto res = run_aco(model, start, all_tasks(s), prices, rules, cfg, seed);
    if (std::abs(res.utility - brute_best(model, start, all_tasks(s), prices, rules)) <= kUtilityTol) ++hits;
  }
  const double rate = hits / static_cast<double>(kAcoInstances);
  report(8, "path planner optimality", rate >= kAcoHitRate,
         fmt("%d/%d instances reach the exhaustive optimum (%.0f%%, need %.0f%%)", hits, kAcoInstances, 100 * rate,
             100 * kAcoHitRate));
}

double gradient_error() {
  SeededRng rng(kBaseSeed + 5);
  QNet net({1, 2, 2}, rng);
  auto p = net.flat();
  for (double& v : p) v += rng.uniform(-0.3, 0.3);
  net.set_flat(p);
  Eigen::MatrixXd x(1, 4);
  x << 0.7, -1.2, 2.0, 0.3;
  const std::vector<int> actions{0, 1, 1, 0};
  Eigen::VectorXd targets(4), weights(4);
  targets << 1.0, -0.5, 2.0, 0.1;
  weights << 1.0, 0.4, 0.8, 0.6;
  QNet::Gradient g;
  net.loss_and_gradient(x, actions, targets, weights, &g);
  std::vector<double> analytic;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < g.weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < g.weights[l].cols(); ++c) analytic.push_back(g.weights[l](r, c));
    for (Eigen::Index r = 0; r < g.biases[l].size(); ++r) analytic.push_back(g.biases[l](r));
  }
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto up = p, down = p;
    up[k] += h;
    down[k] -= h;
    QNet a = net, b = net;
    a.set_flat(up);
    b.set_flat(down);
    const double numeric = (a.loss_and_gradient(x, actions, targets, weights, nullptr) -
                            b.loss_and_gradient(x, actions, targets, weights, nullptr)) /
                           (2 * h);
    worst = std::max(worst, std::abs(numeric - analytic[k]) / std::max({1.0, std::abs(numeric), std::abs(analytic[k])}));
  }
  return worst;
}

void dqn_learning() {
  GenConfig g = GenConfig::defaults();
  g.n_tasks = 5;
  g.n_workers = 3;
  g.region_width = g.region_height = 3000.0;
  const Scenario s = generate_scenario(g, kBaseSeed + 6);
  const Matching futures = run_ft_m2m(s, MechanismConfig::aco_with_iterations(50), kBaseSeed + 6);
  TrainConfig tc;
  auto agents = make_agents(s, tc, kBaseSeed + 6);
  EpisodeConfig base;
  base.spot = false;
  const auto rep = train_agents(s, futures, agents, kDqnEpisodes, base, kBaseSeed + 6);
  double first = 0.0, last = 0.0;
  for (int i = 0; i < kDqnWindow; ++i) {
    first += rep.episode_rewards[i];
    last += rep.episode_rewards[kDqnEpisodes - kDqnWindow + i];
  }
  first /= kDqnWindow;
  last /= kDqnWindow;
  const double grad = gradient_error();
  report(11, "learning and gradients", last > first && grad <= kGradTol,
         fmt("%zu contracts, mean episode reward first %d %.3f, last %d %.3f; max gradient error %.1e (tol %.0e)",
             futures.contracts.size(), kDqnWindow, first, kDqnWindow, last, grad, kGradTol));
}

// 2, 3, 9, 10 and 12 read one paired Monte Carlo over the default scenario.
void market_comparison() {
  ScenarioSource src;
  src.gen = GenConfig::defaults();
  MonteCarloConfig cfg;
  cfg.replications = kReplications;
  cfg.base_seed = kBaseSeed;
  cfg.parallel = std::max(1u, std::thread::hardware_concurrency());

  std::mutex mu;
  std::size_t ir_violations = 0, over_bound = 0, matchings = 0;
  int max_rounds = 0, max_bound = 0, min_bound = 1 << 30;
  const auto observe = [&](int r, const std::vector<MechanismRun>& runs) {
    for (const auto& run : runs) {
      if (run.mechanism != Mechanism::stagewise || !run.futures) continue;
      const Scenario s = src.make(replication_seed(cfg.base_seed, r));
      const auto v = check_individual_rationality(*run.futures, s);
      const int bound = convergence_round_bound(s);
      std::lock_guard lock(mu);
      ++matchings;
      ir_violations += v.size();
      if (run.futures->rounds > bound) ++over_bound;
      max_rounds = std::max(max_rounds, run.futures->rounds);
      max_bound = std::max(max_bound, bound);
      min_bound = std::min(min_bound, bound);
    }
  };

  cfg.mechanisms = {Mechanism::stagewise, Mechanism::conspot};
  const auto t0 = std::chrono::steady_clock::now();
  const MonteCarloResult head = run_monte_carlo(src, cfg, observe);
  const double secs = seconds_since(t0);

  cfg.mechanisms = {Mechanism::stagewise_no_td, Mechanism::stagewise_no_risk, Mechanism::conspot_no_td,
                    Mechanism::quality_p, Mechanism::random_m};
  const MonteCarloResult rest = run_monte_carlo(src, cfg);

  report(2, "individual rationality", matchings == kReplications && ir_violations == 0,
         fmt("%zu futures matchings, %zu violations", matchings, ir_violations));
  report(3, "round bound", matchings == kReplications && over_bound == 0,
         fmt("%zu/%zu runs exceed their bound; max rounds %d, bounds %d..%d", over_bound, matchings, max_rounds,
             min_bound, max_bound));

  const auto stage = head.rows_of(Mechanism::stagewise);
  const auto spot = head.rows_of(Mechanism::conspot);
  const auto no_risk = rest.rows_of(Mechanism::stagewise_no_risk);
  int fewer = 0, safer = 0;
  double stage_ni = 0.0, spot_ni = 0.0, potaw = 0.0, potaw_no_risk = 0.0;
  for (int r = 0; r < kReplications; ++r) {
    fewer += stage[r].metrics.ni < spot[r].metrics.ni;
    safer += stage[r].metrics.potaw <= no_risk[r].metrics.potaw;
    stage_ni += stage[r].metrics.ni;
    spot_ni += spot[r].metrics.ni;
    potaw += stage[r].metrics.potaw;
    potaw_no_risk += no_risk[r].metrics.potaw;
  }
  const double n = kReplications;
  report(9, "interaction count", fewer >= kNiShare * n && secs <= kComparisonSeconds,
         fmt("stagewise below conspot in %d/%d seeds (need %.0f); mean NI %.0f vs %.0f; %.0f s (limit %.0f s)", fewer,
             kReplications, kNiShare * n, stage_ni / n, spot_ni / n, secs, kComparisonSeconds));
  report(10, "abandonment", safer >= kPotawShare * n && potaw / n < kPotawMean,
         fmt("stagewise <= no-risk in %d/%d seeds (need %.0f); mean PoTAW %.4f vs %.4f (limit %.2f)", safer,
             kReplications, kPotawShare * n, potaw / n, potaw_no_risk / n, kPotawMean));

  double worst = 0.0;
  std::size_t rows = 0;
  for (const auto* res : {&head, &rest})
    for (const auto& row : res->rows) {
      worst = std::max(worst, row.conservation_error);
      ++rows;
    }
  report(12, "money conservation", rows == 7 * kReplications && worst <= kMoneyTol,
         fmt("%zu mechanism replications, max discrepancy %.1e (tol %.0e)", rows, worst, kMoneyTol));
}

}  // namespace

int main(int argc, char** argv) {
  // Optional group names restrict the run, e.g. "acceptance knapsack age".
  const std::vector<std::pair<std::string, void (*)()>> groups{
      {"stability", stability_and_equilibrium}, {"sweep", payment_sweep}, {"completion", completion_oracle},
      {"knapsack", knapsack_oracle},            {"age", age_closed_form}, {"planner", aco_optimality},
      {"learning", dqn_learning},               {"market", market_comparison}};
  const std::vector<std::string> only(argv + 1, argv + argc);
  for (const auto& [name, run] : groups)
    if (only.empty() || std::find(only.begin(), only.end(), name) != only.end()) run();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
