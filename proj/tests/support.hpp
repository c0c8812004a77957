#pragma once

#include <cstddef>
#include <vector>

#include "mcs/core/types.hpp"

namespace mcs::test {

// Hand-sized scenario: tasks on a row 1000 m apart, workers at the origin,
// no delays, a single channel value and every desired payment at `price`.
inline Scenario tiny_scenario(std::size_t n_tasks, std::size_t n_workers, double price = 8.0) {
  Scenario s;
  s.horizon = 100;
  for (std::size_t i = 0; i < n_tasks; ++i) {
    TaskSpec t;
    t.id = static_cast<int>(i);
    t.t_begin = 0;
    t.t_end = 90;
    t.budget = 40.0;
    t.desired_quality = 0.5;
    t.loc = {1000.0 * static_cast<double>(i + 1), 0.0};
    t.data_bits = 100e6;
    s.tasks.push_back(t);
  }
  for (std::size_t j = 0; j < n_workers; ++j) {
    WorkerSpec w;
    w.id = static_cast<int>(j);
    w.sense_cost = 0.004;
    w.delay_cost = 0.1;
    w.transmit_power = 0.5;
    w.move_cost = 0.03;
    w.sense_rate = 400e6;
    w.speed = 150.0;
    w.start = {0.0, 0.0};
    s.workers.push_back(w);
  }
  s.uncertainty.delay_prob = PairTable<double>(n_workers, n_tasks, 0.0);
  s.uncertainty.t_min = 1;
  s.uncertainty.t_max = 1;
  s.uncertainty.mu1 = 300;
  s.uncertainty.mu2 = 300;
  s.econ.p_desire = PairTable<double>(n_workers, n_tasks, price);
  return s;
}

}  // namespace mcs::test
