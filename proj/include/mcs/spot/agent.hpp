#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcs/core/rng.hpp"
#include "mcs/core/types.hpp"
#include "mcs/spot/qnet.hpp"
#include "mcs/spot/replay.hpp"

namespace mcs {

enum class Action { proceed = 0, abandon = 1 };
inline constexpr int kActionCount = 2;

// What a worker sees when it decides whether to keep its current target.
struct AgentContext {
  Location loc;
  int t = 0;
  bool has_target = false;
  std::size_t target = 0;
  double slack = 0.0;         // t_e of the target minus t, in slots
  double compensation = 0.0;  // q owed if the target is dropped
  double distance = 0.0;      // meters to the target
  std::size_t remaining_path = 0;  // tasks queued after the target
};

// Scale factors that map every feature into [0, 1].
struct StateBounds {
  double width = 1.0;
  double height = 1.0;
  int horizon = 1;
  std::size_t tasks = 1;
  double max_compensation = 1.0;

  static StateBounds of(const Scenario& s);
};

inline constexpr int kStateSize = 8;

// x, y, t/T, target slot, window slack, q, distance, remaining path length.
std::vector<double> encode_state(const AgentContext& ctx, const StateBounds& bounds);

enum class RewardCase { en_route, abandon, service, completion };

// en_route: -V1 * cost of the slot; abandon: -q; service: -V1 * cost of the
// slot; completion: +p.
double reward(RewardCase c, double amount, double cost_weight);

struct TrainConfig {
  std::vector<int> hidden{64, 64};
  double discount = 0.95;
  double lr = 1e-3;
  double rms_decay = 0.99;
  std::size_t replay_capacity = 10000;
  std::size_t batch = 32;
  double per_alpha = 0.6;
  double per_beta_start = 0.4;
  double per_beta_end = 1.0;
  double priority_floor = 1e-6;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_fraction = 0.8;  // of all episodes
  int target_sync = 100;            // train steps
  int train_steps_per_episode = 16;

  void validate() const;  // throws ConfigError
  double epsilon(int episode, int episodes) const;
  double beta(int episode, int episodes) const;
};

struct LossResult {
  double loss = 0.0;
  std::vector<double> td_errors;
};

// Weighted mean of (r + discount * max_a Q_target(s', a) * (1 - done) - Q(s, a))^2.
LossResult q_loss(std::span<const Experience> batch, std::span<const double> weights, const QNet& online,
                  const QNet& target, double discount);

// Uniform action with probability epsilon, otherwise the argmax; ties keep
// the current target.
Action act(std::span<const double> state, const QNet& net, double epsilon, SeededRng& rng);

// One worker's learner: prediction and target networks, optimizer, replay.
class DqnAgent {
 public:
  DqnAgent(const TrainConfig& cfg, SeededRng& rng);

  const TrainConfig& config() const { return cfg_; }
  const QNet& online() const { return online_; }
  const QNet& target() const { return target_; }
  QNet& online() { return online_; }
  PrioritizedReplay& replay() { return replay_; }
  const PrioritizedReplay& replay() const { return replay_; }
  int steps() const { return steps_; }

  Action act(std::span<const double> state, double epsilon, SeededRng& rng) const;
  void remember(Experience e) { replay_.add(std::move(e)); }
  void sync_target() { target_ = online_; }

 private:
  friend double train_step(DqnAgent& agent, double beta, SeededRng& rng);

  TrainConfig cfg_;
  QNet online_;
  QNet target_;
  RmsProp opt_;
  PrioritizedReplay replay_;
  int steps_ = 0;
};

// Samples a batch by priority, takes one optimizer step on the prediction
// network, refreshes the sampled priorities and syncs the target network
// every cfg.target_sync steps. Returns the batch loss.
double train_step(DqnAgent& agent, double beta, SeededRng& rng);

}  // namespace mcs
