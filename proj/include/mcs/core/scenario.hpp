#pragma once

#include <string>
#include <vector>

#include "mcs/core/types.hpp"

namespace mcs {

// Every invariant violation in `s`; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

// Throws ValidationError listing the violations, if any.
void require_valid(const Scenario& s);

// Violations of the worker invariants (all rates positive, finite location).
std::vector<std::string> validate_worker(const WorkerSpec& w);

}  // namespace mcs
