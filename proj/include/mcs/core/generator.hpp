#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mcs/core/types.hpp"

namespace mcs {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct GenConfig {
  std::size_t n_tasks = 10;
  std::size_t n_workers = 15;
  int horizon = 100;
  double region_width = 8000.0;
  double region_height = 8000.0;

  IntRange t_begin{1, 90};
  IntRange window{10, 99};
  Range budget{30.0, 45.0};
  Range desired_quality{1.0, 1.5};
  Range data_bits{80e6, 160e6};

  Range sense_cost{0.002, 0.006};
  Range delay_cost{0.05, 0.1};
  Range transmit_power{0.45, 0.55};
  Range move_cost{0.02, 0.05};
  Range sense_rate{256e6, 512e6};
  Range speed{100.0, 200.0};

  Range delay_prob{0.005, 0.01};
  int t_min = 1;
  int t_max = 5;
  int mu1 = 150;
  int mu2 = 400;

  Range p_desire{8.0, 10.0};
  double price_tick = 0.1;  // budgets and asked payments are drawn on this grid

  double cost_weight = 1.0;
  double quality_weight = 10.0;
  double settlement_weight = 0.5;
  double u_min = 0.1;
  double rho = 0.3;
  double dp = 0.5;
  double bandwidth_hz = 6e6;
  double q_frac = 0.5;

  // Calibrated defaults (data sizes and desired quality scaled so that a task
  // can be served within its window and reach its target).
  static GenConfig defaults() { return {}; }
  // Unscaled ranges: gigabit data sizes and a desired quality of 10 to 15.
  static GenConfig literal_units();

  void validate() const;  // throws ConfigError
};

Scenario generate_scenario(const GenConfig& cfg, std::uint64_t seed);

// Generated tasks combined with externally supplied workers (e.g. from CSV).
Scenario generate_scenario(const GenConfig& cfg, std::uint64_t seed,
                           const std::vector<WorkerSpec>& workers);

}  // namespace mcs
