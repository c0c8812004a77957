#include "mcs/economics/costs.hpp"

#include <cmath>

#include "mcs/core/errors.hpp"
#include "mcs/stochastic/completion.hpp"

namespace mcs {

namespace {

int ceil_slots(double x) {
  if (x <= 0.0) return 0;
  return static_cast<int>(std::ceil(x - 1e-9));
}

}  // namespace

int movement_slots(double meters, double speed) {
  if (!(speed > 0.0)) throw ContractViolation("speed must be positive");
  return ceil_slots(meters / speed);
}

Travel travel(const WorkerSpec& worker, const Location& from, const TaskSpec& task) {
  int slots = movement_slots(distance(from, task.loc), worker.speed);
  return {slots, worker.move_cost * slots};
}

int sensing_slots(const WorkerSpec& worker, const TaskSpec& task) {
  if (!(worker.sense_rate > 0.0)) throw DomainError("sensing rate must be positive");
  return ceil_slots(task.data_bits / worker.sense_rate);
}

ServiceTimes service_times(const WorkerSpec& worker, const TaskSpec& task, double gamma, double bandwidth_hz) {
  ServiceTimes out;
  if (task.data_bits <= 0.0) return out;
  out.tau_sense = sensing_slots(worker, task);
  out.c_sense = worker.sense_cost * out.tau_sense;
  out.tau_tran = transmission_slots({task.data_bits, bandwidth_hz, worker.transmit_power}, gamma);
  out.c_tran = worker.transmit_power * out.tau_tran;
  return out;
}

double delay_cost(const WorkerSpec& worker, int delay_slots) {
  if (delay_slots < 0) throw ContractViolation("negative delay slots");
  return worker.delay_cost * delay_slots;
}

CostBreakdown total_cost(const CostParts& p, double cost_weight) {
  CostBreakdown b;
  b.c_move = p.c_move;
  b.c_delay = p.c_delay;
  b.c_sense = p.c_sense;
  b.c_tran = p.c_tran;
  b.tau_move = p.tau_move;
  b.tau_delay = p.tau_delay;
  b.tau_sense = p.tau_sense;
  b.tau_tran = p.tau_tran;
  b.total_cost = cost_weight * (p.c_move + p.c_delay + p.c_sense + p.c_tran);
  b.total_time = p.tau_move + p.tau_delay + p.tau_sense + p.tau_tran;
  return b;
}

}  // namespace mcs
