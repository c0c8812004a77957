#pragma once

#include "mcs/core/types.hpp"

namespace mcs {

struct Travel {
  int tau_move = 0;
  double c_move = 0.0;
};

// tau_move = ceil(distance / v), c_move = e_m * tau_move.
Travel travel(const WorkerSpec& worker, const Location& from, const TaskSpec& task);
int movement_slots(double meters, double speed);

struct ServiceTimes {
  int tau_sense = 0;
  double c_sense = 0.0;
  int tau_tran = 0;
  double c_tran = 0.0;
};

ServiceTimes service_times(const WorkerSpec& worker, const TaskSpec& task, double gamma, double bandwidth_hz);
int sensing_slots(const WorkerSpec& worker, const TaskSpec& task);

double delay_cost(const WorkerSpec& worker, int delay_slots);

struct CostParts {
  double c_move = 0.0;
  double c_delay = 0.0;
  double c_sense = 0.0;
  double c_tran = 0.0;
  int tau_move = 0;
  int tau_delay = 0;
  int tau_sense = 0;
  int tau_tran = 0;
};

struct CostBreakdown {
  double c_move = 0.0;
  double c_delay = 0.0;
  double c_sense = 0.0;
  double c_tran = 0.0;
  int tau_move = 0;
  int tau_delay = 0;
  int tau_sense = 0;
  int tau_tran = 0;
  double total_cost = 0.0;
  int total_time = 0;
};

// Weights the monetary parts by V1; times are summed unweighted.
CostBreakdown total_cost(const CostParts& parts, double cost_weight);

}  // namespace mcs
