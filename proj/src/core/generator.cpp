#include "mcs/core/generator.hpp"

#include <cmath>
#include <string>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"

namespace mcs {

namespace {

void check(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw ConfigError(std::string("range ") + name + " is inverted or not finite");
}

void check(const IntRange& r, const char* name) {
  if (r.lo > r.hi) throw ConfigError(std::string("range ") + name + " is inverted");
}

double on_tick(double x, double tick) {
  if (tick <= 0.0) return x;
  return std::round(x / tick) * tick;
}

}  // namespace

GenConfig GenConfig::literal_units() {
  GenConfig c;
  c.data_bits = {2e9, 4e9};
  c.desired_quality = {10.0, 15.0};
  return c;
}

void GenConfig::validate() const {
  if (horizon <= 0) throw ConfigError("horizon must be positive");
  if (!(region_width > 0.0) || !(region_height > 0.0)) throw ConfigError("region must be non-empty");
  check(t_begin, "t_begin");
  check(window, "window");
  check(budget, "budget");
  check(desired_quality, "desired_quality");
  check(data_bits, "data_bits");
  check(sense_cost, "sense_cost");
  check(delay_cost, "delay_cost");
  check(transmit_power, "transmit_power");
  check(move_cost, "move_cost");
  check(sense_rate, "sense_rate");
  check(speed, "speed");
  check(delay_prob, "delay_prob");
  check(p_desire, "p_desire");
  if (t_begin.lo < 0 || t_begin.hi >= horizon) throw ConfigError("t_begin must lie in [0, horizon)");
  if (window.lo < 1) throw ConfigError("window length must be at least 1");
  if (t_min < 1 || t_min > t_max) throw ConfigError("delay duration range must satisfy 1 <= t_min <= t_max");
  if (mu1 < 1 || mu1 > mu2) throw ConfigError("channel range must satisfy 1 <= mu1 <= mu2");
  if (delay_prob.lo < 0.0 || delay_prob.hi > 1.0) throw ConfigError("delay probability must lie in [0,1]");
  if (budget.lo < 0.0 || p_desire.lo < 0.0) throw ConfigError("budgets and payments must be non-negative");
  if (desired_quality.lo <= 0.0 || data_bits.lo <= 0.0) throw ConfigError("Q_D and data size must be positive");
  if (sense_cost.lo <= 0.0 || delay_cost.lo <= 0.0 || transmit_power.lo <= 0.0 || move_cost.lo <= 0.0 ||
      sense_rate.lo <= 0.0 || speed.lo <= 0.0)
    throw ConfigError("worker rates must be positive");
  if (settlement_weight < 0.0 || settlement_weight > 1.0) throw ConfigError("V3 must lie in [0,1]");
  if (!(u_min > 0.0)) throw ConfigError("u_min must be positive");
  if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in (0,1]");
  if (!(dp > 0.0)) throw ConfigError("dp must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (q_frac < 0.0 || q_frac > 1.0) throw ConfigError("q_frac must lie in [0,1]");
}

Scenario generate_scenario(const GenConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SeededRng root(seed);
  SeededRng wr = root.substream("workers");
  std::vector<WorkerSpec> workers;
  workers.reserve(cfg.n_workers);
  for (std::size_t j = 0; j < cfg.n_workers; ++j) {
    WorkerSpec w;
    w.id = static_cast<int>(j);
    w.start = {wr.uniform(0.0, cfg.region_width), wr.uniform(0.0, cfg.region_height)};
    w.sense_cost = wr.uniform(cfg.sense_cost.lo, cfg.sense_cost.hi);
    w.delay_cost = wr.uniform(cfg.delay_cost.lo, cfg.delay_cost.hi);
    w.transmit_power = wr.uniform(cfg.transmit_power.lo, cfg.transmit_power.hi);
    w.move_cost = wr.uniform(cfg.move_cost.lo, cfg.move_cost.hi);
    w.sense_rate = wr.uniform(cfg.sense_rate.lo, cfg.sense_rate.hi);
    w.speed = wr.uniform(cfg.speed.lo, cfg.speed.hi);
    workers.push_back(w);
  }
  return generate_scenario(cfg, seed, workers);
}

Scenario generate_scenario(const GenConfig& cfg, std::uint64_t seed, const std::vector<WorkerSpec>& workers) {
  cfg.validate();
  SeededRng root(seed);
  Scenario s;
  s.horizon = cfg.horizon;
  s.seed = seed;
  s.workers = workers;

  SeededRng tr = root.substream("tasks");
  for (std::size_t i = 0; i < cfg.n_tasks; ++i) {
    TaskSpec t;
    t.id = static_cast<int>(i);
    t.t_begin = tr.uniform_int(cfg.t_begin.lo, cfg.t_begin.hi);
    t.t_end = std::min(t.t_begin + tr.uniform_int(cfg.window.lo, cfg.window.hi), cfg.horizon);
    t.budget = on_tick(tr.uniform(cfg.budget.lo, cfg.budget.hi), cfg.price_tick);
    t.desired_quality = tr.uniform(cfg.desired_quality.lo, cfg.desired_quality.hi);
    t.loc = {tr.uniform(0.0, cfg.region_width), tr.uniform(0.0, cfg.region_height)};
    t.data_bits = tr.uniform(cfg.data_bits.lo, cfg.data_bits.hi);
    s.tasks.push_back(t);
  }

  const std::size_t nw = s.workers.size();
  const std::size_t nt = s.tasks.size();
  SeededRng ur = root.substream("uncertainty");
  s.uncertainty.delay_prob = PairTable<double>(nw, nt);
  for (std::size_t j = 0; j < nw; ++j) {
    double a = ur.uniform(cfg.delay_prob.lo, cfg.delay_prob.hi);
    for (std::size_t i = 0; i < nt; ++i) s.uncertainty.delay_prob(j, i) = a;
  }
  s.uncertainty.t_min = cfg.t_min;
  s.uncertainty.t_max = cfg.t_max;
  s.uncertainty.mu1 = cfg.mu1;
  s.uncertainty.mu2 = cfg.mu2;

  auto& e = s.econ;
  e.cost_weight = cfg.cost_weight;
  e.quality_weight = cfg.quality_weight;
  e.settlement_weight = cfg.settlement_weight;
  e.u_min = cfg.u_min;
  e.rho.fill(cfg.rho);
  e.dp = cfg.dp;
  e.bandwidth_hz = cfg.bandwidth_hz;
  e.q_frac = cfg.q_frac;
  SeededRng pr = root.substream("p_desire");
  e.p_desire = PairTable<double>(nw, nt);
  for (std::size_t j = 0; j < nw; ++j)
    for (std::size_t i = 0; i < nt; ++i)
      e.p_desire(j, i) = on_tick(pr.uniform(cfg.p_desire.lo, cfg.p_desire.hi), cfg.price_tick);
  return s;
}

}  // namespace mcs
