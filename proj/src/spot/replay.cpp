#include "mcs/spot/replay.hpp"

#include <algorithm>
#include <cmath>

#include "mcs/core/errors.hpp"

namespace mcs {

SumTree::SumTree(std::size_t capacity) : capacity_(capacity), base_(1) {
  if (capacity == 0) throw ConfigError("sum tree needs at least one leaf");
  while (base_ < capacity) base_ *= 2;
  tree_.assign(2 * base_, 0.0);
}

void SumTree::set(std::size_t leaf, double value) {
  if (leaf >= capacity_) throw ContractViolation("sum tree leaf out of range");
  if (!(value >= 0.0)) throw ContractViolation("sum tree values must be non-negative");
  std::size_t i = base_ + leaf;
  tree_[i] = value;
  for (i /= 2; i >= 1; i /= 2) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

double SumTree::get(std::size_t leaf) const { return tree_[base_ + leaf]; }

std::size_t SumTree::find(double u) const {
  std::size_t i = 1;
  while (i < base_) {
    const double left = tree_[2 * i];
    if (u < left || tree_[2 * i + 1] <= 0.0) {
      i = 2 * i;
    } else {
      u -= left;
      i = 2 * i + 1;
    }
  }
  // Rounding can walk onto an empty leaf at the right edge; step back.
  std::size_t leaf = i - base_;
  while (leaf > 0 && tree_[base_ + leaf] <= 0.0) --leaf;
  return leaf;
}

PrioritizedReplay::PrioritizedReplay(std::size_t capacity, double alpha, double floor)
    : tree_(capacity), alpha_(alpha), floor_(floor) {
  if (alpha < 0.0) throw ConfigError("priority exponent must be non-negative");
  if (!(floor > 0.0)) throw ConfigError("priority floor must be positive");
  priorities_.assign(capacity, 0.0);
}

void PrioritizedReplay::store(std::size_t i, double priority) {
  priorities_[i] = priority;
  tree_.set(i, std::pow(priority, alpha_));
}

void PrioritizedReplay::add(Experience e) {
  const std::size_t i = next_;
  if (items_.size() < capacity())
    items_.push_back(std::move(e));
  else
    items_[i] = std::move(e);
  store(i, max_priority_);
  next_ = (next_ + 1) % capacity();
}

double PrioritizedReplay::probability(std::size_t i) const { return tree_.get(i) / tree_.total(); }

ReplaySample PrioritizedReplay::sample(std::size_t batch, double beta, SeededRng& rng) const {
  if (items_.empty()) throw ContractViolation("sampling an empty replay buffer");
  ReplaySample out;
  const double total = tree_.total();
  const double n = static_cast<double>(items_.size());
  double max_w = 0.0;
  for (std::size_t k = 0; k < batch; ++k) {
    const std::size_t i = std::min(tree_.find(rng.uniform01() * total), items_.size() - 1);
    out.indices.push_back(i);
    const double w = std::pow(n * probability(i), -beta);
    out.weights.push_back(w);
    max_w = std::max(max_w, w);
  }
  for (double& w : out.weights) w /= max_w;
  return out;
}

void PrioritizedReplay::update(std::size_t i, double td_error) {
  if (i >= items_.size()) throw ContractViolation("replay index out of range");
  const double p = std::abs(td_error) + floor_;
  max_priority_ = std::max(max_priority_, p);
  store(i, p);
}

}  // namespace mcs
