#pragma once

#include <cstddef>
#include <vector>

#include "mcs/core/rng.hpp"

namespace mcs {

struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

// Binary tree of partial sums over a fixed number of leaves.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  void set(std::size_t leaf, double value);
  double get(std::size_t leaf) const;
  double total() const { return tree_[1]; }
  // Leaf whose cumulative range contains u, for u in [0, total()).
  std::size_t find(double u) const;

 private:
  std::size_t capacity_;
  std::size_t base_;  // first leaf slot, a power of two
  std::vector<double> tree_;
};

struct ReplaySample {
  std::vector<std::size_t> indices;
  std::vector<double> weights;  // importance-sampling weights, max-normalized
};

// Ring buffer sampled with probability proportional to priority^alpha.
class PrioritizedReplay {
 public:
  PrioritizedReplay(std::size_t capacity, double alpha, double floor = 1e-6);

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return tree_.capacity(); }
  double alpha() const { return alpha_; }

  // New items enter at the largest priority seen so far.
  void add(Experience e);
  const Experience& at(std::size_t i) const { return items_[i]; }
  double priority(std::size_t i) const { return priorities_[i]; }
  double probability(std::size_t i) const;

  ReplaySample sample(std::size_t batch, double beta, SeededRng& rng) const;
  // Priority becomes |td| + floor.
  void update(std::size_t i, double td_error);

 private:
  void store(std::size_t i, double priority);

  SumTree tree_;
  double alpha_;
  double floor_;
  double max_priority_ = 1.0;
  std::size_t next_ = 0;
  std::vector<Experience> items_;
  std::vector<double> priorities_;
};

}  // namespace mcs
