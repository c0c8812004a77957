#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "mcs/core/types.hpp"

namespace mcs {

struct TransmissionProfile {
  double data_bits = 0.0;
  double bandwidth_hz = 1.0;
  double transmit_power = 1.0;
};

// ceil(d / (W log2(1 + e_t * gamma))); zero data takes zero slots.
int transmission_slots(const TransmissionProfile& tx, double gamma);

// Timing of one worker serving one task, measured from the departure slot.
// The task completes iff max(tau_move + D, open_offset) + tau_sense + tau_tran(Z)
// <= deadline_slack, where D is the total delay and open_offset is the gap until
// the task window opens (arrival is clamped to t_b).
struct CompletionModel {
  int tau_move = 0;
  int tau_sense = 0;
  double deadline_slack = 0.0;
  double open_offset = -std::numeric_limits<double>::infinity();
  TransmissionProfile tx;
};

// One task completion scenario: which movement slots were delayed, for how
// long, and the channel value.
struct Tcs {
  int delay_count = 0;
  std::vector<int> durations;
  int delay_free = 0;
  int channel = 0;

  int total_delay() const;
};

bool tcs_completes(const CompletionModel& m, const Tcs& tcs);

struct Enumerate {
  int max_move_slots = 8;
};
struct MonteCarlo {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};
// Grouped exact evaluation: delay-sum distribution times the histogram of
// transmission slots over the channel grid. Same value as Enumerate, no cap.
struct Exact {};

using CompletionMethod = std::variant<Enumerate, MonteCarlo, Exact>;

double completion_probability(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                              const CompletionMethod& method = Exact{});

// Calls fn(tcs, weight) for every scenario over tau_move slots and every
// channel value. Throws CapExceeded beyond `max_move_slots`.
void for_each_tcs(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                  const std::function<void(const Tcs&, double)>& fn, int max_move_slots = 8);

class CapExceeded : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Distribution of the total delay accumulated over `slots` movement slots.
class DelayDistribution {
 public:
  DelayDistribution(const DelayModel& delay, int slots);

  double pmf(int total) const;
  // Pr(D <= x); x may be fractional (floored) or negative.
  double cdf(double x) const;
  double mean() const;
  int max_total() const { return static_cast<int>(cdf_.size()) - 1; }

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

// (transmission slots, probability) over the channel grid, merged by slot count.
std::vector<std::pair<int, double>> transmission_histogram(const TransmissionProfile& tx,
                                                           const ChannelModel& channel);

}  // namespace mcs
