#include "mcs/sim/verify_suites.hpp"

#include <cmath>
#include <limits>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/core/scenario_json.hpp"
#include "mcs/economics/aoi.hpp"
#include "mcs/matching/ft_m2m.hpp"
#include "mcs/matching/knapsack.hpp"
#include "mcs/matching/matching_json.hpp"
#include "mcs/matching/verify.hpp"
#include "mcs/spot/st_m2m.hpp"
#include "mcs/stochastic/completion.hpp"

namespace mcs {

namespace {

constexpr std::pair<Suite, std::string_view> kSuites[] = {
    {Suite::stability, "stability"},
    {Suite::rationality, "rationality"},
    {Suite::equilibrium, "equilibrium"},
    {Suite::oracles, "oracles"},
};

nlohmann::json coalition_json(const Coalition& c, const Scenario& s) {
  return {{"type", c.type},
          {"worker", c.worker},
          {"tasks", c.tasks},
          {"evictions", c.evictions},
          {"worker_utility_before", c.worker_utility_before},
          {"worker_utility_after", c.worker_utility_after},
          {"description", c.describe(s)}};
}

// Best subset by total gain under the tick-rounded budget, by enumeration.
double exhaustive_gain(const std::vector<KnapsackItem>& items, double budget, double tick) {
  const long cap = static_cast<long>(std::floor(budget / tick + 1e-7));
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << items.size()); ++mask) {
    long w = 0;
    double g = 0.0;
    for (std::size_t k = 0; k < items.size(); ++k)
      if (mask >> k & 1u) {
        w += static_cast<long>(std::ceil(items[k].price / tick - 1e-7));
        g += items[k].gain;
      }
    if (w <= cap) best = std::max(best, g);
  }
  return best;
}

void oracle_trial(SuiteReport& r, std::uint64_t seed) {
  SeededRng rng(seed);
  // Knapsack against enumeration.
  {
    std::vector<KnapsackItem> items;
    const int n = rng.uniform_int(0, 12);
    for (int k = 0; k < n; ++k)
      items.push_back({static_cast<std::size_t>(k), k, std::round(rng.uniform(0.5, 12.0) * 10.0) / 10.0,
                       rng.uniform(-1.0, 6.0)});
    const double budget = std::round(rng.uniform(0.0, 40.0) * 10.0) / 10.0;
    const auto choice = select_workers_knapsack(items, budget, 0.1);
    const double best = exhaustive_gain(items, budget, 0.1);
    ++r.checks;
    if (std::abs(choice.total_gain - best) > 1e-9 * std::max(1.0, std::abs(best)) || choice.total_price > budget + 1e-9)
      r.findings.push_back({"knapsack differs from enumeration",
                            {{"seed", seed}, {"budget", budget}, {"dp_gain", choice.total_gain}, {"best", best}}});
  }
  // Enumerated completion probability against sampling.
  {
    CompletionModel m;
    m.tau_move = rng.uniform_int(0, 6);
    m.tau_sense = rng.uniform_int(0, 3);
    m.deadline_slack = m.tau_move + m.tau_sense + rng.uniform_int(1, 12);
    m.tx = {rng.uniform(1e6, 4e6), 1e6, rng.uniform(0.4, 0.6)};
    const DelayModel delay{rng.uniform(0.0, 0.4), 1, rng.uniform_int(1, 4)};
    const ChannelModel channel{rng.uniform_int(1, 5), rng.uniform_int(6, 40)};
    const double exact = completion_probability(m, delay, channel, Enumerate{});
    const double sampled = completion_probability(m, delay, channel, MonteCarlo{100000, seed});
    double mass = 0.0;
    for_each_tcs(m, delay, channel, [&](const Tcs&, double w) { mass += w; });
    r.checks += 2;
    if (std::abs(exact - sampled) > 0.01)
      r.findings.push_back({"enumeration and sampling disagree", {{"seed", seed}, {"exact", exact}, {"sampled", sampled}}});
    if (std::abs(mass - 1.0) > 1e-9)
      r.findings.push_back({"scenario weights do not sum to one", {{"seed", seed}, {"mass", mass}}});
  }
}

void age_oracle(SuiteReport& r) {
  for (int n = 0; n <= 100; ++n) {
    double sum = 0.0;
    for (int t = 0; t <= n; ++t) sum += t;
    const double mean = n == 0 ? 0.5 : sum / n;
    const Aoi a = aoi(n, 0);
    const Aoi b = aoi(0, n);
    ++r.checks;
    if (a.age != sum || a.average != mean || b.age != sum || b.average != mean)
      r.findings.push_back({"age closed form differs from summation", {{"n", n}, {"age", a.age}, {"sum", sum}}});
  }
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) {
  for (const auto& [s, n] : kSuites)
    if (n == name) return s;
  return std::nullopt;
}

std::string_view suite_name(Suite suite) {
  for (const auto& [s, n] : kSuites)
    if (s == suite) return n;
  throw ContractViolation("unnamed suite");
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["suite"] = suite_name(suite);
  j["trials"] = trials;
  j["checks"] = checks;
  j["passed"] = passed();
  j["findings"] = nlohmann::json::array();
  for (const auto& f : findings) j["findings"].push_back({{"what", f.what}, {"counterexample", f.counterexample}});
  return j;
}

Scenario small_instance(std::uint64_t seed, const GenConfig& base) {
  SeededRng rng = SeededRng(seed).substream("size");
  GenConfig g = base;
  g.n_tasks = static_cast<std::size_t>(rng.uniform_int(3, 6));
  g.n_workers = static_cast<std::size_t>(rng.uniform_int(4, 8));
  return generate_scenario(g, seed);
}

Matching small_spot_matching(const Scenario& s, std::uint64_t seed, const AcoConfig& aco) {
  SeededRng rng = SeededRng(seed).substream("spot-slot");
  SpotMarketState state;
  state.t = rng.uniform_int(0, s.horizon / 5);
  for (std::size_t t = 0; t < s.tasks.size(); ++t) {
    state.tasks.push_back(t);
    state.budgets.push_back(s.tasks[t].budget);
  }
  for (std::size_t w = 0; w < s.workers.size(); ++w) {
    state.workers.push_back(w);
    state.starts.push_back({s.workers[w].start, static_cast<double>(state.t)});
  }
  SpotOptions opt;
  opt.aco = aco;
  opt.seed = seed;
  return run_st_m2m(state, s, opt);
}

SuiteReport check_matching(Suite suite, const Matching& m, const Scenario& s) {
  SuiteReport r;
  r.suite = suite;
  r.trials = 1;
  auto attach = [&](nlohmann::json j) {
    j["matching"] = to_json(m);
    return j;
  };
  switch (suite) {
    case Suite::stability:
      for (const auto& c : find_blocking_coalitions(m, s))
        r.findings.push_back({"blocking coalition", attach(coalition_json(c, s))});
      ++r.checks;
      break;
    case Suite::rationality:
      for (const auto& v : check_individual_rationality(m, s))
        r.findings.push_back({v.kind, attach({{"detail", v.detail}})});
      ++r.checks;
      break;
    case Suite::equilibrium:
      for (const auto& v : check_competitive_equilibrium(m, s))
        r.findings.push_back({v.kind, attach({{"detail", v.detail}})});
      ++r.checks;
      break;
    case Suite::oracles:
      throw ConfigError("the oracle suite does not check a matching");
  }
  return r;
}

SuiteReport run_suite(Suite suite, int trials, std::uint64_t seed, const AcoConfig& aco) {
  if (trials < 1) throw ConfigError("at least one trial is required");
  SuiteReport r;
  r.suite = suite;
  r.trials = trials;
  if (suite == Suite::oracles) age_oracle(r);
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    if (suite == Suite::oracles) {
      oracle_trial(r, trial_seed);
      continue;
    }
    const Scenario s = small_instance(trial_seed);
    const Matching futures = run_ft_m2m(s, aco, trial_seed);
    const Matching spot = small_spot_matching(s, trial_seed, aco);
    for (const Matching* m : {&futures, &spot}) {
      auto one = check_matching(suite, *m, s);
      r.checks += one.checks;
      for (auto& f : one.findings) {
        f.counterexample["trial_seed"] = trial_seed;
        f.counterexample["scenario"] = to_json(s);
        r.findings.push_back(std::move(f));
      }
    }
  }
  return r;
}

}  // namespace mcs
