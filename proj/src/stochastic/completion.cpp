#include "mcs/stochastic/completion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/stochastic/sampling.hpp"

namespace mcs {

namespace {

// Slot arithmetic is integral but the slack may come from an expected clock.
constexpr double kSlotEps = 1e-9;

bool fits(double used, double slack) { return used <= slack + kSlotEps; }

void check_models(const DelayModel& delay, const ChannelModel& channel) {
  if (!(delay.a >= 0.0 && delay.a <= 1.0)) throw ContractViolation("delay probability outside [0,1]");
  if (delay.t_min < 0 || delay.t_min > delay.t_max) throw ContractViolation("delay range inverted");
  if (channel.mu1 > channel.mu2) throw ContractViolation("channel range inverted");
}

}  // namespace

int transmission_slots(const TransmissionProfile& tx, double gamma) {
  if (tx.data_bits <= 0.0) return 0;
  double snr = tx.transmit_power * gamma;
  if (!(snr > 0.0)) throw DomainError("non-positive SNR");
  if (!(tx.bandwidth_hz > 0.0)) throw DomainError("non-positive bandwidth");
  double rate = tx.bandwidth_hz * std::log2(1.0 + snr);
  return static_cast<int>(std::ceil(tx.data_bits / rate - 1e-12));
}

int Tcs::total_delay() const { return std::accumulate(durations.begin(), durations.end(), 0); }

bool tcs_completes(const CompletionModel& m, const Tcs& tcs) {
  double arrival = std::max<double>(m.tau_move + tcs.total_delay(), m.open_offset);
  double used = arrival + m.tau_sense + transmission_slots(m.tx, tcs.channel);
  return fits(used, m.deadline_slack);
}

void for_each_tcs(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                  const std::function<void(const Tcs&, double)>& fn, int max_move_slots) {
  check_models(delay, channel);
  if (m.tau_move > max_move_slots)
    throw CapExceeded("enumeration over " + std::to_string(m.tau_move) + " movement slots exceeds cap of " +
                      std::to_string(max_move_slots) + "; use Monte-Carlo");
  const double channel_weight = 1.0 / (channel.mu2 - channel.mu1 + 1);
  const int span = delay.t_max - delay.t_min + 1;
  Tcs tcs;
  // Walk every per-slot outcome (delay-free, or delayed by each duration).
  std::function<void(int, double)> walk = [&](int slot, double weight) {
    if (slot == m.tau_move) {
      for (int z = channel.mu1; z <= channel.mu2; ++z) {
        tcs.channel = z;
        fn(tcs, weight * channel_weight);
      }
      return;
    }
    ++tcs.delay_free;
    walk(slot + 1, weight * (1.0 - delay.a));
    --tcs.delay_free;
    if (delay.a > 0.0) {
      ++tcs.delay_count;
      for (int d = delay.t_min; d <= delay.t_max; ++d) {
        tcs.durations.push_back(d);
        walk(slot + 1, weight * delay.a / span);
        tcs.durations.pop_back();
      }
      --tcs.delay_count;
    }
  };
  walk(0, 1.0);
}

DelayDistribution::DelayDistribution(const DelayModel& delay, int slots) {
  if (slots < 0) throw ContractViolation("negative movement slot count");
  const int span = delay.t_max - delay.t_min + 1;
  pmf_.assign(1, 1.0);
  for (int n = 0; n < slots; ++n) {
    std::vector<double> next(pmf_.size() + delay.t_max, 0.0);
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
      if (pmf_[k] == 0.0) continue;
      next[k] += pmf_[k] * (1.0 - delay.a);
      if (delay.a > 0.0)
        for (int d = delay.t_min; d <= delay.t_max; ++d) next[k + d] += pmf_[k] * delay.a / span;
    }
    pmf_.swap(next);
  }
  cdf_.resize(pmf_.size());
  std::partial_sum(pmf_.begin(), pmf_.end(), cdf_.begin());
}

double DelayDistribution::pmf(int total) const {
  if (total < 0 || total >= static_cast<int>(pmf_.size())) return 0.0;
  return pmf_[total];
}

double DelayDistribution::cdf(double x) const {
  double f = std::floor(x + kSlotEps);
  if (f < 0.0) return 0.0;
  if (f >= static_cast<double>(cdf_.size() - 1)) return 1.0;
  return std::min(1.0, cdf_[static_cast<std::size_t>(f)]);
}

double DelayDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) m += k * pmf_[k];
  return m;
}

std::vector<std::pair<int, double>> transmission_histogram(const TransmissionProfile& tx, const ChannelModel& channel) {
  std::map<int, double> bins;
  const double w = 1.0 / (channel.mu2 - channel.mu1 + 1);
  for (int z = channel.mu1; z <= channel.mu2; ++z) bins[transmission_slots(tx, z)] += w;
  return {bins.begin(), bins.end()};
}

namespace {

double exact_probability(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel) {
  DelayDistribution dist(delay, m.tau_move);
  double pr = 0.0;
  for (auto [slots, weight] : transmission_histogram(m.tx, channel)) {
    double service = m.tau_sense + slots;
    if (!fits(m.open_offset + service, m.deadline_slack)) continue;
    pr += weight * dist.cdf(m.deadline_slack - service - m.tau_move);
  }
  return std::clamp(pr, 0.0, 1.0);
}

double enumerated_probability(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                              int cap) {
  double pr = 0.0;
  for_each_tcs(
      m, delay, channel,
      [&](const Tcs& tcs, double weight) {
        if (tcs_completes(m, tcs)) pr += weight;
      },
      cap);
  return pr;
}

double monte_carlo_probability(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                               const MonteCarlo& mc) {
  if (mc.samples == 0) throw ContractViolation("Monte-Carlo needs at least one sample");
  SeededRng rng(mc.seed);
  std::size_t hits = 0;
  Tcs tcs;
  for (std::size_t n = 0; n < mc.samples; ++n) {
    tcs.durations.clear();
    for (int slot = 0; slot < m.tau_move; ++slot) {
      auto d = sample_delay(rng, delay.a, delay.t_min, delay.t_max);
      if (d.occurred) tcs.durations.push_back(d.duration);
    }
    tcs.channel = sample_channel(rng, channel.mu1, channel.mu2);
    if (tcs_completes(m, tcs)) ++hits;
  }
  return static_cast<double>(hits) / mc.samples;
}

}  // namespace

double completion_probability(const CompletionModel& m, const DelayModel& delay, const ChannelModel& channel,
                              const CompletionMethod& method) {
  check_models(delay, channel);
  if (m.tau_move < 0 || m.tau_sense < 0) throw ContractViolation("negative slot counts");
  return std::visit(
      [&](const auto& how) -> double {
        using T = std::decay_t<decltype(how)>;
        if constexpr (std::is_same_v<T, Exact>)
          return exact_probability(m, delay, channel);
        else if constexpr (std::is_same_v<T, Enumerate>)
          return enumerated_probability(m, delay, channel, how.max_move_slots);
        else
          return monte_carlo_probability(m, delay, channel, how);
      },
      method);
}

}  // namespace mcs
