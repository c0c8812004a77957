#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mcs {

struct KnapsackItem {
  std::size_t worker = 0;  // caller's handle, returned untouched
  int worker_id = 0;       // used for tie-breaking
  double price = 0.0;
  double gain = 0.0;
};

struct KnapsackChoice {
  std::vector<std::size_t> chosen;  // indices into the item list, ascending
  double total_gain = 0.0;
  double total_price = 0.0;
};

// 0-1 knapsack maximising total gain under the budget. Prices are converted
// to integer ticks (weights rounded up, capacity rounded down), so the chosen
// set never exceeds the budget. Ties prefer fewer workers, then lower total
// price, then the lexicographically smallest set of worker ids.
KnapsackChoice select_workers_knapsack(std::span<const KnapsackItem> items, double budget, double tick = 0.1);

// max(p - dp, cost)
double decrement_payment(double p, double dp, double cost);

}  // namespace mcs
