#include "mcs/stochastic/risk.hpp"

namespace mcs {

bool risk_gate_worker_utility(double expected_utility, double u_min, double rho) {
  return expected_utility / u_min >= 1.0 - rho;
}

bool risk_gate_completion(double pr_complete, double rho) { return pr_complete > 1.0 - rho; }

bool risk_gate_task_quality(double expected_quality, double desired_quality, double rho) {
  return expected_quality / desired_quality >= 1.0 - rho;
}

}  // namespace mcs
