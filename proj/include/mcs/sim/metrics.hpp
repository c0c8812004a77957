#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "mcs/core/types.hpp"
#include "mcs/spot/environment.hpp"

namespace mcs {

// Realized outcome of one mechanism on one replication.
struct ReplicationMetrics {
  double quality = 0.0;         // sum over tasks of received quality
  double task_utility = 0.0;    // sum over tasks
  double worker_utility = 0.0;  // sum over workers
  double welfare = 0.0;         // task_utility + worker_utility
  double podsq = 0.0;
  double potaw = 0.0;
  double rt_ms = 0.0;
  double ni = 0.0;
  double dip_ms = 0.0;
  double ecip_j = 0.0;
};

struct MetricField {
  std::string_view name;
  double ReplicationMetrics::*member;
};

// Column order shared by the CSV and JSON writers.
inline constexpr std::array<MetricField, 10> kMetricFields{{
    {"quality", &ReplicationMetrics::quality},
    {"task_utility", &ReplicationMetrics::task_utility},
    {"worker_utility", &ReplicationMetrics::worker_utility},
    {"welfare", &ReplicationMetrics::welfare},
    {"podsq", &ReplicationMetrics::podsq},
    {"potaw", &ReplicationMetrics::potaw},
    {"rt_ms", &ReplicationMetrics::rt_ms},
    {"ni", &ReplicationMetrics::ni},
    {"dip_ms", &ReplicationMetrics::dip_ms},
    {"ecip_j", &ReplicationMetrics::ecip_j},
}};

// Fraction of tasks whose received quality reaches Q_D.
double podsq(const Scenario& s, const TransactionLog& log);
// Failed trades over accepted trades; released unsigned work is not counted
// as accepted. 0 when nothing was accepted.
double potaw(const TransactionLog& log);

// Quality, utilities, welfare, PoDSQ and PoTAW of one log. Timing and
// message fields are left at zero for the caller.
ReplicationMetrics outcome_metrics(const Scenario& s, const TransactionLog& log);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

struct MetricsReport {
  std::size_t replications = 0;
  std::array<Stat, kMetricFields.size()> stats{};  // in kMetricFields order

  const Stat& operator[](std::string_view name) const;
};

MetricsReport compute_metrics(std::span<const ReplicationMetrics> runs);

}  // namespace mcs
