#include "mcs/matching/knapsack.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "mcs/core/errors.hpp"
#include "mcs/stochastic/completion.hpp"

namespace mcs {

namespace {

// A chosen set is a bitmask over item positions in worker-id order, so the
// lexicographic comparison of sorted id lists reduces to the lowest
// differing bit.
template <std::size_t Words>
struct Pick {
  double gain = 0.0;
  long price = 0;
  int count = 0;
  std::array<std::uint64_t, Words> set{};
};

template <std::size_t Words>
bool lex_smaller(const Pick<Words>& a, const Pick<Words>& b) {
  for (std::size_t i = 0; i < Words; ++i) {
    const std::uint64_t d = a.set[i] ^ b.set[i];
    if (d != 0) return (a.set[i] & (d & (~d + 1))) != 0;
  }
  return false;
}

template <std::size_t Words>
bool better(const Pick<Words>& a, const Pick<Words>& b) {
  const double tol = 1e-9 * std::max({1.0, std::abs(a.gain), std::abs(b.gain)});
  if (a.gain > b.gain + tol) return true;
  if (b.gain > a.gain + tol) return false;
  if (a.count != b.count) return a.count < b.count;
  if (a.price != b.price) return a.price < b.price;
  return lex_smaller(a, b);
}

long ticks_up(double x, double tick) { return static_cast<long>(std::ceil(x / tick - 1e-7)); }
long ticks_down(double x, double tick) { return static_cast<long>(std::floor(x / tick + 1e-7)); }

template <std::size_t Words>
std::vector<std::size_t> solve(std::span<const KnapsackItem> items, std::span<const std::size_t> order, long capacity,
                               double tick) {
  std::vector<Pick<Words>> dp(static_cast<std::size_t>(capacity) + 1);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& it = items[order[pos]];
    if (!(it.gain > 0.0)) continue;  // never improves the objective
    const long w = ticks_up(it.price, tick);
    if (w > capacity) continue;
    for (long c = capacity; c >= w; --c) {
      Pick<Words> cand = dp[static_cast<std::size_t>(c - w)];
      cand.gain += it.gain;
      cand.price += w;
      cand.count += 1;
      cand.set[pos / 64] |= std::uint64_t{1} << (pos % 64);
      Pick<Words>& slot = dp[static_cast<std::size_t>(c)];
      if (better(cand, slot)) slot = cand;
    }
  }
  std::vector<std::size_t> chosen;
  const auto& best = dp[static_cast<std::size_t>(capacity)];
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    if (best.set[pos / 64] >> (pos % 64) & 1U) chosen.push_back(order[pos]);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

KnapsackChoice select_workers_knapsack(std::span<const KnapsackItem> items, double budget, double tick) {
  if (!(tick > 0.0)) throw ContractViolation("price tick must be positive");
  for (const auto& it : items)
    if (it.price < 0.0) throw ContractViolation("negative price in knapsack");
  KnapsackChoice out;
  if (budget < 0.0) return out;

  // Visit items in id order so the lexicographic tie-break sees sorted lists.
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].worker_id < items[b].worker_id; });

  const long capacity = ticks_down(budget, tick);
  if (items.size() <= 64)
    out.chosen = solve<1>(items, order, capacity, tick);
  else if (items.size() <= 256)
    out.chosen = solve<4>(items, order, capacity, tick);
  else if (items.size() <= 1024)
    out.chosen = solve<16>(items, order, capacity, tick);
  else
    throw CapExceeded("knapsack over more than 1024 proposals");
  for (std::size_t k : out.chosen) {
    out.total_gain += items[k].gain;
    out.total_price += items[k].price;
  }
  return out;
}

double decrement_payment(double p, double dp, double cost) { return std::max(p - dp, cost); }

}  // namespace mcs
