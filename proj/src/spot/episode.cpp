#include "mcs/spot/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mcs/core/errors.hpp"

namespace mcs {

std::uint64_t world_seed(std::uint64_t seed) { return SeededRng(seed).substream("world").seed(); }

PlanStart spot_start(const Environment& env, std::size_t worker, const PathModel& model) {
  const Scenario& s = env.scenario();
  std::vector<std::size_t> order;
  PlanStart from{env.location(worker), static_cast<double>(env.t())};
  if (env.phase(worker) == WorkerPhase::serving) {
    from.clock = env.busy_until(worker);
  } else if (auto t = env.target(worker)) {
    order.push_back(*t);
  }
  const auto rest = env.queue(worker);
  order.insert(order.end(), rest.begin(), rest.end());
  if (order.empty()) return from;
  PlanningRules rules = PlanningRules::spot(s.econ);
  rules.time_windows = false;
  const std::vector<double> prices(s.tasks.size(), 0.0);
  return model.evaluate(from, order, prices, rules).end;
}

SpotRecruitment recruit_spot(Environment& env, std::span<const std::size_t> tasks, const std::vector<PathModel>& models,
                             const SpotOptions& opt) {
  const Scenario& s = env.scenario();
  if (models.size() != s.workers.size()) throw ContractViolation("one path model per worker");
  SpotRecruitment out;
  if (tasks.empty()) return out;

  SpotMarketState state;
  state.t = env.t();
  state.tasks.assign(tasks.begin(), tasks.end());
  state.starts.resize(s.workers.size());
  state.budgets.resize(s.tasks.size());
  for (std::size_t t = 0; t < s.tasks.size(); ++t) state.budgets[t] = std::max(0.0, env.residual_budget(t));
  for (std::size_t w = 0; w < s.workers.size(); ++w) {
    state.starts[w] = spot_start(env, w, models[w]);
    if (state.starts[w].clock < s.horizon) state.workers.push_back(w);
  }
  if (state.workers.empty()) return out;

  MarketSpec spec = spot_market(state, s, opt);
  spec.models = &models;
  spec.barred = PairTable<int>(s.workers.size(), s.tasks.size(), 0);
  for (std::size_t w : state.workers) {
    if (auto t = env.target(w)) spec.barred(w, *t) = 1;
    for (std::size_t t : env.queue(w)) spec.barred(w, t) = 1;
  }
  const Matching m = run_market(spec);
  out.markets = 1;
  out.messages = m.messages;
  for (std::size_t w = 0; w < m.worker_paths.size(); ++w)
    for (std::size_t t : m.worker_paths[w]) {
      env.assign(w, t, *m.contract(t, w), true);
      ++out.contracts;
    }
  return out;
}

std::vector<DqnAgent> make_agents(const Scenario& s, const TrainConfig& cfg, std::uint64_t seed) {
  SeededRng root = SeededRng(seed).substream("agent");
  std::vector<DqnAgent> agents;
  agents.reserve(s.workers.size());
  for (std::size_t w = 0; w < s.workers.size(); ++w) {
    SeededRng rng = root.substream(w);
    agents.emplace_back(cfg, rng);
  }
  return agents;
}

EpisodeTrace run_episode(const Scenario& s, const Matching& futures, std::vector<DqnAgent>& agents,
                         const EpisodeConfig& cfg, std::uint64_t seed) {
  const std::size_t nw = s.workers.size();
  const std::size_t nt = s.tasks.size();
  if (agents.size() != nw) throw ContractViolation("one agent per worker");

  SeededRng root(seed);
  Environment env(s, world_seed(seed));
  env.assign_matching(futures, true);

  std::vector<PathModel> models;
  if (cfg.spot) {
    models.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) models.emplace_back(s, w);
  }

  EpisodeTrace trace;
  std::vector<std::size_t> open;  // S' waiting for the next market
  if (cfg.spot)
    for (std::size_t t = 0; t < nt; ++t)
      if (futures.status[t] == TaskStatus::unmatched || futures.status[t] == TaskStatus::withdrawn) open.push_back(t);

  env.set_slot_hook([&](Environment& e) {
    auto failed = e.take_failed_tasks();
    if (!cfg.spot) return;
    open.insert(open.end(), failed.begin(), failed.end());
    std::vector<std::size_t> tasks;
    for (std::size_t t : open) {
      if (std::find(tasks.begin(), tasks.end(), t) != tasks.end()) continue;
      if (s.tasks[t].t_end <= e.t() || e.residual_budget(t) <= 0.0) continue;
      tasks.push_back(t);
    }
    open.clear();
    if (tasks.empty()) return;
    std::sort(tasks.begin(), tasks.end());
    SpotOptions opt = cfg.spot_options;
    opt.seed = mix_seed(cfg.spot_options.seed, static_cast<std::uint64_t>(e.t()));
    const auto r = recruit_spot(e, tasks, models, opt);
    trace.spot.messages += r.messages;
    trace.spot.markets += r.markets;
    trace.spot.contracts += r.contracts;
  });

  const StateBounds bounds = StateBounds::of(s);
  struct Pending {
    std::vector<double> state;
    int action = 0;
  };
  std::vector<std::optional<Pending>> last(nw);
  std::vector<SeededRng> explore;
  for (std::size_t w = 0; w < nw; ++w) explore.push_back(root.substream("explore").substream(w));

  env.set_policy([&](std::size_t w, const AgentContext& ctx) {
    auto state = encode_state(ctx, bounds);
    const double r = env.take_reward(w);
    if (cfg.learn && last[w]) agents[w].remember({last[w]->state, last[w]->action, r, state, false});
    const Action a = agents[w].act(state, cfg.epsilon, explore[w]);
    last[w] = Pending{std::move(state), static_cast<int>(a)};
    ++trace.decisions;
    return a;
  });

  env.run();

  for (std::size_t w = 0; w < nw; ++w) {
    const double r = env.take_reward(w);
    if (cfg.learn && last[w])
      agents[w].remember({last[w]->state, last[w]->action, r, encode_state(env.context(w), bounds), true});
  }

  trace.log = env.log();
  trace.rewards = trace.log.worker_reward;
  for (double r : trace.rewards) trace.total_reward += r;

  if (cfg.learn) {
    SeededRng train = root.substream("train");
    for (std::size_t w = 0; w < nw; ++w) {
      auto& agent = agents[w];
      for (int k = 0; k < agent.config().train_steps_per_episode; ++k) {
        if (agent.replay().size() < agent.config().batch) break;
        trace.losses.push_back(train_step(agent, cfg.beta, train));
      }
    }
  }
  return trace;
}

TrainingReport train_agents(const Scenario& s, const Matching& futures, std::vector<DqnAgent>& agents, int episodes,
                            const EpisodeConfig& base, std::uint64_t seed) {
  if (episodes < 0) throw ConfigError("episode count must be >= 0");
  if (agents.empty()) return {};
  const TrainConfig& tc = agents.front().config();
  TrainingReport report;
  for (int ep = 0; ep < episodes; ++ep) {
    EpisodeConfig cfg = base;
    cfg.learn = true;
    cfg.epsilon = tc.epsilon(ep, episodes);
    cfg.beta = tc.beta(ep, episodes);
    cfg.spot_options.seed = mix_seed(base.spot_options.seed, static_cast<std::uint64_t>(ep));
    const auto trace = run_episode(s, futures, agents, cfg, mix_seed(seed, static_cast<std::uint64_t>(ep)));
    report.episode_rewards.push_back(trace.total_reward);
    double sum = 0.0;
    for (double l : trace.losses) sum += l;
    report.mean_losses.push_back(trace.losses.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                      : sum / static_cast<double>(trace.losses.size()));
  }
  return report;
}

}  // namespace mcs
