#include "mcs/core/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "mcs/core/errors.hpp"

namespace mcs {

double distance(const Location& a, const Location& b) {
  return std::hypot(a.lon - b.lon, a.lat - b.lat);
}

std::vector<std::string> validate_worker(const WorkerSpec& w) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      out.push_back("worker " + std::to_string(w.id) + ": " + name + " must be positive");
  };
  positive(w.sense_cost, "e_c");
  positive(w.delay_cost, "e_D");
  positive(w.transmit_power, "e_t");
  positive(w.move_cost, "e_m");
  positive(w.sense_rate, "f");
  positive(w.speed, "speed");
  if (!std::isfinite(w.start.lon) || !std::isfinite(w.start.lat))
    out.push_back("worker " + std::to_string(w.id) + ": location not finite");
  return out;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  auto add = [&](const std::string& msg) { out.push_back(msg); };

  if (s.horizon <= 0) add("horizon must be positive");

  std::set<int> task_ids;
  for (const auto& t : s.tasks) {
    std::string who = "task " + std::to_string(t.id);
    if (!task_ids.insert(t.id).second) add("duplicate task id " + std::to_string(t.id));
    if (t.t_begin < 0) add(who + ": t_b negative");
    if (t.t_begin >= t.t_end) add(who + ": t_b must be before t_e");
    if (t.t_end > s.horizon) add(who + ": t_e beyond horizon");
    if (!(t.budget >= 0.0)) add(who + ": negative budget");
    if (!(t.desired_quality > 0.0)) add(who + ": Q_D must be positive");
    if (!(t.data_bits > 0.0)) add(who + ": data size must be positive");
    if (!std::isfinite(t.loc.lon) || !std::isfinite(t.loc.lat)) add(who + ": location not finite");
  }

  std::set<int> worker_ids;
  for (const auto& w : s.workers) {
    if (!worker_ids.insert(w.id).second) add("duplicate worker id " + std::to_string(w.id));
    for (auto& v : validate_worker(w)) add(v);
  }

  const auto& u = s.uncertainty;
  if (u.t_min < 1 || u.t_min > u.t_max) add("delay duration range must satisfy 1 <= t_min <= t_max");
  if (u.mu1 > u.mu2) add("channel range must satisfy mu1 <= mu2");
  if (u.mu1 <= 0) add("channel values must be positive");
  if (u.delay_prob.workers() != s.workers.size() || u.delay_prob.tasks() != s.tasks.size()) {
    add("delay probability table has wrong shape");
  } else {
    for (std::size_t w = 0; w < s.workers.size(); ++w)
      for (std::size_t t = 0; t < s.tasks.size(); ++t) {
        double a = u.delay_prob(w, t);
        if (!(a >= 0.0 && a <= 1.0)) {
          add("delay probability out of [0,1] for worker " + std::to_string(s.workers[w].id));
          w = s.workers.size();
          break;
        }
      }
  }

  const auto& e = s.econ;
  if (!(e.settlement_weight >= 0.0 && e.settlement_weight <= 1.0)) add("V3 must lie in [0,1]");
  if (!(e.cost_weight >= 0.0)) add("V1 must be non-negative");
  if (!(e.quality_weight >= 0.0)) add("V2 must be non-negative");
  if (!(e.u_min > 0.0)) add("u_min must be positive");
  for (std::size_t k = 0; k < e.rho.size(); ++k)
    if (!(e.rho[k] > 0.0 && e.rho[k] <= 1.0)) add("rho" + std::to_string(k + 1) + " must lie in (0,1]");
  if (!(e.dp > 0.0)) add("payment decrement must be positive");
  if (!(e.bandwidth_hz > 0.0)) add("bandwidth must be positive");
  if (!(e.q_frac >= 0.0 && e.q_frac <= 1.0)) add("q_frac must lie in [0,1]");
  if (e.p_desire.workers() != s.workers.size() || e.p_desire.tasks() != s.tasks.size()) {
    add("desired payment table has wrong shape");
  } else {
    for (std::size_t w = 0; w < s.workers.size(); ++w)
      for (std::size_t t = 0; t < s.tasks.size(); ++t)
        if (!(e.p_desire(w, t) >= 0.0)) {
          add("negative desired payment");
          w = s.workers.size();
          break;
        }
  }
  return out;
}

void require_valid(const Scenario& s) {
  auto v = validate_scenario(s);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& m : v) os << "\n  " << m;
  throw ValidationError(os.str());
}

}  // namespace mcs
