#pragma once

#include "mcs/core/rng.hpp"
#include "mcs/core/types.hpp"
#include "mcs/matching/market.hpp"

namespace mcs {

// One-shot recruitment used by the non-market baselines: each task picks
// workers at their desired payment with no compensation clause, and every
// worker visits its tasks by earliest deadline. Each (worker, task)
// candidate costs two messages, a willingness notice and a selection notice.

// Workers by descending 1/E[AGE] (ties: lower worker index), added while the
// residual budget covers their asked payment.
Matching select_quality_p(const Scenario& s);

// Workers in a uniformly random order, added while affordable.
Matching select_random_m(const Scenario& s, SeededRng& rng);

// Sort a path by (t_end, task index).
void order_by_deadline(const Scenario& s, std::vector<std::size_t>& path);

}  // namespace mcs
