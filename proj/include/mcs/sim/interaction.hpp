#pragma once

#include "mcs/core/rng.hpp"
#include "mcs/matching/market.hpp"

namespace mcs {

// Latency and device power ranges used to price decision-making messages.
struct InteractionCostModel {
  double uplink_lo_ms = 0.5;  // worker -> owner
  double uplink_hi_ms = 11.0;
  double downlink_lo_ms = 0.5;  // owner -> worker
  double downlink_hi_ms = 4.0;
  double worker_power_lo_w = 0.2;
  double worker_power_hi_w = 0.4;
  double owner_power_lo_w = 6.0;
  double owner_power_hi_w = 20.0;

  void validate() const;  // throws ConfigError
};

struct InteractionCost {
  double dip_ms = 0.0;  // summed message latency
  double ecip_j = 0.0;  // summed sender power times latency
};

// One latency and one sender power drawn per message; worker-sent messages
// go uplink at worker power, owner-sent ones downlink at owner power.
InteractionCost sample_interaction_cost(const MessageTally& messages, const InteractionCostModel& model,
                                        SeededRng& rng);

}  // namespace mcs
