#include "mcs/sim/metrics.hpp"

#include <cmath>

#include "mcs/core/errors.hpp"

namespace mcs {

double podsq(const Scenario& s, const TransactionLog& log) {
  if (s.tasks.empty()) return 0.0;
  std::size_t met = 0;
  for (std::size_t t = 0; t < s.tasks.size(); ++t)
    if (log.quality[t] >= s.tasks[t].desired_quality) ++met;
  return static_cast<double>(met) / static_cast<double>(s.tasks.size());
}

double potaw(const TransactionLog& log) {
  std::size_t accepted = 0, failed = 0;
  for (const auto& p : log.pairs) {
    if (!p.counted()) continue;
    ++accepted;
    if (p.failed()) ++failed;
  }
  return accepted == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(accepted);
}

ReplicationMetrics outcome_metrics(const Scenario& s, const TransactionLog& log) {
  ReplicationMetrics m;
  for (std::size_t t = 0; t < s.tasks.size(); ++t) {
    m.quality += log.quality[t];
    m.task_utility += log.task_utility(t, s.econ.quality_weight, s.econ.settlement_weight);
  }
  for (std::size_t w = 0; w < s.workers.size(); ++w) m.worker_utility += log.worker_utility(w);
  m.welfare = m.task_utility + m.worker_utility;
  m.podsq = podsq(s, log);
  m.potaw = potaw(log);
  return m;
}

const Stat& MetricsReport::operator[](std::string_view name) const {
  for (std::size_t i = 0; i < kMetricFields.size(); ++i)
    if (kMetricFields[i].name == name) return stats[i];
  throw ContractViolation("unknown metric " + std::string(name));
}

MetricsReport compute_metrics(std::span<const ReplicationMetrics> runs) {
  if (runs.empty()) throw ContractViolation("metrics need at least one replication");
  MetricsReport r;
  r.replications = runs.size();
  const double n = static_cast<double>(runs.size());
  for (std::size_t i = 0; i < kMetricFields.size(); ++i) {
    const auto member = kMetricFields[i].member;
    double sum = 0.0;
    for (const auto& m : runs) sum += m.*member;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& m : runs) ss += (m.*member - mean) * (m.*member - mean);
    r.stats[i] = {mean, runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
  }
  return r;
}

}  // namespace mcs
