#pragma once

#include "mcs/core/rng.hpp"
#include "mcs/core/types.hpp"

namespace mcs {

struct DelayDraw {
  bool occurred = false;
  int duration = 0;
};

DelayDraw sample_delay(SeededRng& rng, double a, int t_min, int t_max);
int sample_channel(SeededRng& rng, int mu1, int mu2);

struct Expectations {
  double alpha = 0.0;
  double delay_duration = 0.0;
  double channel = 0.0;
};

Expectations expectations(const DelayModel& delay, const ChannelModel& channel);

}  // namespace mcs
