#include "mcs/spot/agent.hpp"

#include <algorithm>
#include <cmath>

#include "mcs/core/errors.hpp"

namespace mcs {

namespace {

double unit(double x) { return std::clamp(x, 0.0, 1.0); }

Eigen::MatrixXd stack(std::span<const Experience> batch, bool next) {
  Eigen::MatrixXd x(kStateSize, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& v = next ? batch[i].next_state : batch[i].state;
    if (v.size() != kStateSize) throw ContractViolation("state vector of the wrong width");
    for (int k = 0; k < kStateSize; ++k) x(k, static_cast<Eigen::Index>(i)) = v[k];
  }
  return x;
}

}  // namespace

StateBounds StateBounds::of(const Scenario& s) {
  StateBounds b;
  double max_x = 1.0, max_y = 1.0, max_p = 1.0;
  for (const auto& t : s.tasks) {
    max_x = std::max(max_x, t.loc.lon);
    max_y = std::max(max_y, t.loc.lat);
  }
  for (const auto& w : s.workers) {
    max_x = std::max(max_x, w.start.lon);
    max_y = std::max(max_y, w.start.lat);
  }
  for (std::size_t w = 0; w < s.econ.p_desire.workers(); ++w)
    for (std::size_t t = 0; t < s.econ.p_desire.tasks(); ++t) max_p = std::max(max_p, s.econ.p_desire(w, t));
  b.width = max_x;
  b.height = max_y;
  b.horizon = std::max(1, s.horizon);
  b.tasks = std::max<std::size_t>(1, s.tasks.size());
  b.max_compensation = std::max(1e-9, s.econ.q_frac * max_p);
  return b;
}

std::vector<double> encode_state(const AgentContext& ctx, const StateBounds& b) {
  const double diag = std::hypot(b.width, b.height);
  std::vector<double> x(kStateSize, 0.0);
  x[0] = unit(ctx.loc.lon / b.width);
  x[1] = unit(ctx.loc.lat / b.height);
  x[2] = unit(static_cast<double>(ctx.t) / b.horizon);
  x[3] = ctx.has_target ? unit((ctx.target + 1.0) / static_cast<double>(b.tasks)) : 0.0;
  x[4] = ctx.has_target ? unit(ctx.slack / b.horizon) : 0.0;
  x[5] = ctx.has_target ? unit(ctx.compensation / b.max_compensation) : 0.0;
  x[6] = ctx.has_target ? unit(ctx.distance / diag) : 0.0;
  x[7] = unit(static_cast<double>(ctx.remaining_path) / static_cast<double>(b.tasks));
  return x;
}

double reward(RewardCase c, double amount, double cost_weight) {
  switch (c) {
    case RewardCase::en_route:
    case RewardCase::service:
      return -cost_weight * amount;
    case RewardCase::abandon:
      return -amount;
    case RewardCase::completion:
      return amount;
  }
  return 0.0;
}

void TrainConfig::validate() const {
  if (!(discount >= 0.0 && discount <= 1.0)) throw ConfigError("discount must lie in [0,1]");
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(rms_decay > 0.0 && rms_decay < 1.0)) throw ConfigError("RMSprop decay must lie in (0,1)");
  if (replay_capacity == 0 || batch == 0) throw ConfigError("replay capacity and batch must be positive");
  if (per_alpha < 0.0 || per_beta_start < 0.0 || per_beta_end < 0.0) throw ConfigError("PER exponents must be >= 0");
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 && eps_end <= 1.0))
    throw ConfigError("exploration rates must lie in [0,1]");
  if (!(eps_decay_fraction > 0.0 && eps_decay_fraction <= 1.0)) throw ConfigError("decay fraction must lie in (0,1]");
  if (target_sync < 1) throw ConfigError("target sync period must be positive");
  if (train_steps_per_episode < 0) throw ConfigError("train steps per episode must be >= 0");
  for (int h : hidden)
    if (h < 1) throw ConfigError("hidden sizes must be positive");
}

double TrainConfig::epsilon(int episode, int episodes) const {
  const double span = std::max(1.0, eps_decay_fraction * episodes);
  const double f = std::min(1.0, episode / span);
  return eps_start + (eps_end - eps_start) * f;
}

double TrainConfig::beta(int episode, int episodes) const {
  const double f = episodes <= 1 ? 1.0 : std::min(1.0, episode / static_cast<double>(episodes - 1));
  return per_beta_start + (per_beta_end - per_beta_start) * f;
}

LossResult q_loss(std::span<const Experience> batch, std::span<const double> weights, const QNet& online,
                  const QNet& target, double discount) {
  if (batch.empty()) throw ContractViolation("empty batch");
  if (weights.size() != batch.size()) throw ContractViolation("one weight per sample");
  const Eigen::MatrixXd q = online.forward_batch(stack(batch, false));
  const Eigen::MatrixXd q_next = target.forward_batch(stack(batch, true));
  LossResult out;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const double boot = batch[i].done ? 0.0 : discount * q_next.col(col).maxCoeff();
    const double td = batch[i].reward + boot - q(batch[i].action, col);
    out.td_errors.push_back(td);
    out.loss += weights[i] * td * td;
  }
  out.loss /= static_cast<double>(batch.size());
  return out;
}

Action act(std::span<const double> state, const QNet& net, double epsilon, SeededRng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractViolation("epsilon outside [0,1]");
  if (rng.uniform01() < epsilon) return rng.bernoulli(0.5) ? Action::abandon : Action::proceed;
  Eigen::VectorXd x(static_cast<Eigen::Index>(state.size()));
  for (std::size_t k = 0; k < state.size(); ++k) x(static_cast<Eigen::Index>(k)) = state[k];
  const Eigen::VectorXd q = net.forward(x);
  return q(1) > q(0) ? Action::abandon : Action::proceed;
}

DqnAgent::DqnAgent(const TrainConfig& cfg, SeededRng& rng)
    : cfg_(cfg), replay_(cfg.replay_capacity, cfg.per_alpha, cfg.priority_floor) {
  cfg_.validate();
  std::vector<int> sizes{kStateSize};
  sizes.insert(sizes.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  sizes.push_back(kActionCount);
  online_ = QNet(sizes, rng);
  target_ = online_;
  opt_ = RmsProp(online_, cfg_.lr, cfg_.rms_decay);
}

Action DqnAgent::act(std::span<const double> state, double epsilon, SeededRng& rng) const {
  return mcs::act(state, online_, epsilon, rng);
}

double train_step(DqnAgent& agent, double beta, SeededRng& rng) {
  auto& replay = agent.replay_;
  if (replay.size() < agent.cfg_.batch) throw ContractViolation("replay holds fewer items than one batch");
  const ReplaySample sample = replay.sample(agent.cfg_.batch, beta, rng);

  std::vector<Experience> batch;
  batch.reserve(sample.indices.size());
  for (std::size_t i : sample.indices) batch.push_back(replay.at(i));

  // Targets come from the frozen network; the gradient flows through the
  // prediction network only.
  const Eigen::MatrixXd q_next = agent.target_.forward_batch(stack(batch, true));
  Eigen::VectorXd targets(static_cast<Eigen::Index>(batch.size()));
  Eigen::VectorXd weights(static_cast<Eigen::Index>(batch.size()));
  std::vector<int> actions;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    targets(col) = batch[i].reward + (batch[i].done ? 0.0 : agent.cfg_.discount * q_next.col(col).maxCoeff());
    weights(col) = sample.weights[i];
    actions.push_back(batch[i].action);
  }
  const Eigen::MatrixXd x = stack(batch, false);
  const Eigen::MatrixXd q_before = agent.online_.forward_batch(x);
  QNet::Gradient g;
  const double loss = agent.online_.loss_and_gradient(x, actions, targets, weights, &g);
  agent.opt_.apply(agent.online_, g);

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    replay.update(sample.indices[i], targets(col) - q_before(actions[i], col));
  }
  if (++agent.steps_ % agent.cfg_.target_sync == 0) agent.sync_target();
  return loss;
}

}  // namespace mcs
