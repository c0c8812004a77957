#include "mcs/sim/mechanisms.hpp"

#include <algorithm>
#include <chrono>

#include "mcs/core/errors.hpp"
#include "mcs/sim/baselines.hpp"
#include "mcs/spot/episode.hpp"

namespace mcs {

namespace {

struct Named {
  Mechanism mechanism;
  std::string_view name;
};

constexpr Named kNames[] = {
    {Mechanism::stagewise, "stagewise"},       {Mechanism::stagewise_no_td, "stagewise-no-td"},
    {Mechanism::stagewise_no_risk, "stagewise-no-risk"}, {Mechanism::conspot, "conspot"},
    {Mechanism::conspot_no_td, "conspot-no-td"}, {Mechanism::quality_p, "quality-p"},
    {Mechanism::random_m, "random-m"},
};

std::uint64_t derive(std::uint64_t seed, std::string_view what) { return mix_seed(seed, hash_name(what)); }

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Timed {
  TransactionLog log;
  MessageTally messages;
  std::optional<Matching> futures;
  double rt_ms = 0.0;
};

Timed stagewise(const Scenario& s, const MechanismConfig& cfg, std::uint64_t seed, bool risk, bool windows) {
  Timed out;
  FuturesOptions fo;
  fo.aco = cfg.futures_aco;
  fo.risk_gates = risk;
  fo.time_windows = windows;
  fo.seed = derive(seed, "futures");
  auto t0 = std::chrono::steady_clock::now();
  Matching m = run_ft_m2m(s, fo);
  out.rt_ms = elapsed_ms(t0);

  // Policy training happens offline, before the transaction, and is not
  // part of the decision time.
  auto agents = make_agents(s, cfg.train, derive(seed, "agents"));
  EpisodeConfig base;
  base.spot = cfg.train_with_spot;
  base.spot_options = {cfg.spot_aco, risk, windows, derive(seed, "training-spot")};
  train_agents(s, m, agents, cfg.training_episodes, base, derive(seed, "training"));

  EpisodeConfig eval;
  eval.spot = true;
  eval.learn = false;
  eval.epsilon = 0.0;
  eval.spot_options = {cfg.spot_aco, risk, windows, derive(seed, "spot")};
  t0 = std::chrono::steady_clock::now();
  auto trace = run_episode(s, m, agents, eval, seed);
  out.rt_ms += elapsed_ms(t0);

  out.messages = m.messages;
  out.messages += trace.spot.messages;
  out.log = std::move(trace.log);
  out.futures = std::move(m);
  return out;
}

Timed fixed(const Scenario& s, const Matching& m, std::uint64_t seed, double select_ms) {
  Timed out;
  auto t0 = std::chrono::steady_clock::now();
  out.log = execute_contracts(s, m, seed);
  out.rt_ms = select_ms + elapsed_ms(t0);
  out.messages = m.messages;
  out.futures = m;
  return out;
}

}  // namespace

const std::vector<Mechanism>& all_mechanisms() {
  static const std::vector<Mechanism> all = [] {
    std::vector<Mechanism> v;
    for (const auto& n : kNames) v.push_back(n.mechanism);
    return v;
  }();
  return all;
}

std::string_view mechanism_name(Mechanism m) {
  for (const auto& n : kNames)
    if (n.mechanism == m) return n.name;
  throw ContractViolation("unnamed mechanism");
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  for (const auto& n : kNames)
    if (n.name == name) return n.mechanism;
  return std::nullopt;
}

std::vector<Mechanism> parse_mechanism_list(std::string_view list) {
  std::vector<Mechanism> out;
  std::size_t at = 0;
  while (at <= list.size()) {
    const std::size_t comma = std::min(list.find(',', at), list.size());
    const std::string_view name = list.substr(at, comma - at);
    if (name == "all") {
      for (Mechanism m : all_mechanisms())
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    } else {
      const auto m = parse_mechanism(name);
      if (!m) throw ConfigError("unknown mechanism '" + std::string(name) + "'");
      if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    at = comma + 1;
  }
  return out;
}

AcoConfig MechanismConfig::aco_with_iterations(int iter_max) {
  AcoConfig a;
  a.iter_max = iter_max;
  return a;
}

void MechanismConfig::validate() const {
  futures_aco.validate();
  spot_aco.validate();
  train.validate();
  interaction.validate();
  if (training_episodes < 0) throw ConfigError("training episodes must be >= 0");
}

TransactionLog execute_contracts(const Scenario& s, const Matching& m, std::uint64_t seed) {
  Environment env(s, world_seed(seed));
  env.assign_matching(m, true);
  return env.run();
}

ConspotOutcome run_conspot(const Scenario& s, const SpotOptions& opt, std::uint64_t seed) {
  ConspotOutcome out;
  Environment env(s, world_seed(seed));
  std::vector<PathModel> models;
  for (std::size_t w = 0; w < s.workers.size(); ++w) models.emplace_back(s, w);

  env.set_slot_hook([&](Environment& e) {
    e.take_failed_tasks();
    SpotMarketState state;
    state.t = e.t();
    state.starts.resize(s.workers.size());
    for (std::size_t w = 0; w < s.workers.size(); ++w) {
      state.starts[w] = {e.location(w), static_cast<double>(e.t())};
      const auto phase = e.phase(w);
      if (phase == WorkerPhase::serving || phase == WorkerPhase::delayed) continue;
      e.release_unsigned(w);
      state.workers.push_back(w);
    }
    state.budgets.resize(s.tasks.size());
    for (std::size_t t = 0; t < s.tasks.size(); ++t) {
      state.budgets[t] = std::max(0.0, e.residual_budget(t));
      if (s.tasks[t].t_end > e.t() && state.budgets[t] > 0.0) state.tasks.push_back(t);
    }
    if (state.workers.empty() || state.tasks.empty()) return;

    SpotOptions o = opt;
    o.seed = mix_seed(opt.seed, static_cast<std::uint64_t>(e.t()));
    MarketSpec spec = spot_market(state, s, o);
    spec.plan = PlanMode::single_hop;
    spec.models = &models;
    const Matching m = run_market(spec);
    out.messages += m.messages;
    ++out.markets;

    for (std::size_t w : state.workers) {
      const Proposal* best = nullptr;
      std::size_t best_task = 0;
      for (std::size_t t : m.worker_paths[w])
        for (const auto& p : m.final_proposals[t])
          if (p.worker == w && p.accepted && (best == nullptr || p.worker_gain > best->worker_gain)) {
            best = &p;
            best_task = t;
          }
      if (best != nullptr) e.assign(w, best_task, {best->price, 0.0, TradeStage::spot}, false);
    }
  });
  out.log = env.run();
  return out;
}

MechanismRun run_mechanism(Mechanism mechanism, const Scenario& s, const MechanismConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  MechanismRun run;
  run.mechanism = mechanism;
  run.seed = seed;
  Timed t;
  switch (mechanism) {
    case Mechanism::stagewise:
      t = stagewise(s, cfg, seed, true, true);
      break;
    case Mechanism::stagewise_no_td:
      t = stagewise(s, cfg, seed, true, false);
      break;
    case Mechanism::stagewise_no_risk:
      t = stagewise(s, cfg, seed, false, true);
      break;
    case Mechanism::conspot:
    case Mechanism::conspot_no_td: {
      const bool windows = mechanism == Mechanism::conspot;
      auto t0 = std::chrono::steady_clock::now();
      auto c = run_conspot(s, {cfg.spot_aco, true, windows, derive(seed, "conspot")}, seed);
      t.rt_ms = elapsed_ms(t0);
      t.log = std::move(c.log);
      t.messages = c.messages;
      break;
    }
    case Mechanism::quality_p: {
      auto t0 = std::chrono::steady_clock::now();
      Matching m = select_quality_p(s);
      t = fixed(s, m, seed, elapsed_ms(t0));
      break;
    }
    case Mechanism::random_m: {
      auto t0 = std::chrono::steady_clock::now();
      SeededRng rng(derive(seed, "random-m"));
      Matching m = select_random_m(s, rng);
      t = fixed(s, m, seed, elapsed_ms(t0));
      break;
    }
  }
  run.futures = std::move(t.futures);
  run.log = std::move(t.log);
  run.messages = t.messages;
  run.metrics = outcome_metrics(s, run.log);
  run.metrics.rt_ms = t.rt_ms;
  run.metrics.ni = static_cast<double>(run.messages.total());
  SeededRng irng(derive(seed, "interaction"));
  const auto cost = sample_interaction_cost(run.messages, cfg.interaction, irng);
  run.metrics.dip_ms = cost.dip_ms;
  run.metrics.ecip_j = cost.ecip_j;
  run.conservation_error = conservation_error(run.log);
  return run;
}

MetricsReport run_mechanism(Mechanism mechanism, const Scenario& s, const MechanismConfig& cfg,
                            std::span<const std::uint64_t> seeds) {
  std::vector<ReplicationMetrics> runs;
  for (std::uint64_t seed : seeds) runs.push_back(run_mechanism(mechanism, s, cfg, seed).metrics);
  return compute_metrics(runs);
}

}  // namespace mcs
