#include "mcs/economics/aoi.hpp"

#include "mcs/core/errors.hpp"

namespace mcs {

Aoi aoi(int tau_sense, int tau_tran) {
  if (tau_sense < 0 || tau_tran < 0) throw ContractViolation("negative service time");
  const double n = static_cast<double>(tau_sense) + tau_tran;
  return {(n * n + n) / 2.0, (n + 1.0) / 2.0};
}

double average_age(double tau_sense, double tau_tran) { return (tau_sense + tau_tran + 1.0) / 2.0; }

double service_quality(std::span<const double> average_ages) {
  double q = 0.0;
  for (double age : average_ages) {
    if (!(age > 0.0)) throw DomainError("average age must be positive");
    q += 1.0 / age;
  }
  return q;
}

}  // namespace mcs
