#pragma once

namespace mcs {

// Worker utility gate: E[U] / u_min >= 1 - rho.
bool risk_gate_worker_utility(double expected_utility, double u_min, double rho);

// Completion gate: Pr(beta = 1) > 1 - rho (strict).
bool risk_gate_completion(double pr_complete, double rho);

// Task quality gate: E[Q] / Q_D >= 1 - rho.
bool risk_gate_task_quality(double expected_quality, double desired_quality, double rho);

}  // namespace mcs
