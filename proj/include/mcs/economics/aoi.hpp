#pragma once

#include <span>

namespace mcs {

struct Aoi {
  double age = 0.0;      // sum of ages over the service interval
  double average = 0.0;  // AGE
};

Aoi aoi(int tau_sense, int tau_tran);

// Expected average age with a fractional transmission time.
double average_age(double tau_sense, double tau_tran);

// Q = sum of 1/AGE; throws DomainError on non-positive ages.
double service_quality(std::span<const double> average_ages);

}  // namespace mcs
