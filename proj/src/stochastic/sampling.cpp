#include "mcs/stochastic/sampling.hpp"

namespace mcs {

DelayDraw sample_delay(SeededRng& rng, double a, int t_min, int t_max) {
  if (!rng.bernoulli(a)) return {false, 0};
  return {true, rng.uniform_int(t_min, t_max)};
}

int sample_channel(SeededRng& rng, int mu1, int mu2) { return rng.uniform_int(mu1, mu2); }

Expectations expectations(const DelayModel& delay, const ChannelModel& channel) {
  return {delay.a, 0.5 * (delay.t_min + delay.t_max), 0.5 * (channel.mu1 + channel.mu2)};
}

}  // namespace mcs
