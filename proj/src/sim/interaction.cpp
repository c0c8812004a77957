#include "mcs/sim/interaction.hpp"

#include "mcs/core/errors.hpp"

namespace mcs {

namespace {

bool ordered(double lo, double hi) { return lo >= 0.0 && lo <= hi; }

}  // namespace

void InteractionCostModel::validate() const {
  if (!ordered(uplink_lo_ms, uplink_hi_ms) || !ordered(downlink_lo_ms, downlink_hi_ms))
    throw ConfigError("latency ranges must be ordered and non-negative");
  if (!ordered(worker_power_lo_w, worker_power_hi_w) || !ordered(owner_power_lo_w, owner_power_hi_w))
    throw ConfigError("power ranges must be ordered and non-negative");
}

InteractionCost sample_interaction_cost(const MessageTally& messages, const InteractionCostModel& model,
                                        SeededRng& rng) {
  model.validate();
  InteractionCost out;
  for (std::size_t i = 0; i < messages.worker_sent(); ++i) {
    const double ms = rng.uniform(model.uplink_lo_ms, model.uplink_hi_ms);
    out.dip_ms += ms;
    out.ecip_j += rng.uniform(model.worker_power_lo_w, model.worker_power_hi_w) * ms / 1000.0;
  }
  for (std::size_t i = 0; i < messages.owner_sent(); ++i) {
    const double ms = rng.uniform(model.downlink_lo_ms, model.downlink_hi_ms);
    out.dip_ms += ms;
    out.ecip_j += rng.uniform(model.owner_power_lo_w, model.owner_power_hi_w) * ms / 1000.0;
  }
  return out;
}

}  // namespace mcs
