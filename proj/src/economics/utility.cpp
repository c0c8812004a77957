#include "mcs/economics/utility.hpp"

#include "mcs/economics/aoi.hpp"
#include "mcs/stochastic/completion.hpp"
#include "mcs/stochastic/sampling.hpp"

namespace mcs {

double worker_utility(std::span<const WorkerSettlement> settlements) {
  double u = 0.0;
  for (const auto& s : settlements) {
    if (s.outcome.completed)
      u += s.term.payment - s.outcome.realized.total_cost;
    else
      u -= s.outcome.partial_cost + s.term.compensation;
  }
  return u;
}

double task_utility(std::span<const TaskSettlement> settlements, double quality_weight, double settlement_weight) {
  double quality = 0.0;
  double money = 0.0;
  for (const auto& s : settlements) {
    if (s.completed) {
      quality += 1.0 / s.average_age;
      money -= s.term.payment;
    } else {
      money += s.term.compensation;
    }
  }
  return quality_weight * quality + settlement_weight * money;
}

int expected_transmission_slots(const WorkerSpec& worker, const TaskSpec& task, const ChannelModel& channel,
                                double bandwidth_hz) {
  double gamma = 0.5 * (channel.mu1 + channel.mu2);
  return transmission_slots({task.data_bits, bandwidth_hz, worker.transmit_power}, gamma);
}

double expected_cost(const WorkerSpec& worker, const TaskSpec& task, int tau_move, const ExpectationInputs& in) {
  const auto e = expectations(in.delay, in.channel);
  const int tau_sense = task.data_bits > 0.0 ? sensing_slots(worker, task) : 0;
  const int tau_tran = expected_transmission_slots(worker, task, in.channel, in.bandwidth_hz);
  const double c_move = worker.move_cost * tau_move;
  const double c_delay = worker.delay_cost * tau_move * e.alpha * e.delay_duration;
  const double c_sense = worker.sense_cost * tau_sense;
  const double c_tran = worker.transmit_power * tau_tran;
  return in.cost_weight * (c_move + c_delay + c_sense + c_tran);
}

double expected_cost(const WorkerSpec& worker, const TaskSpec& task, const Location& from,
                     const ExpectationInputs& in) {
  return expected_cost(worker, task, travel(worker, from, task).tau_move, in);
}

double expected_average_age(const WorkerSpec& worker, const TaskSpec& task, const ChannelModel& channel,
                            double bandwidth_hz) {
  const int tau_sense = task.data_bits > 0.0 ? sensing_slots(worker, task) : 0;
  return average_age(tau_sense, expected_transmission_slots(worker, task, channel, bandwidth_hz));
}

double expected_worker_gain(const ExpectedWorkerTerm& t) {
  const double b = t.completion_prob;
  return b * (t.term.payment - t.expected_cost) - (1.0 - b) * (t.expected_cost + t.term.compensation);
}

double expected_worker_utility(std::span<const ExpectedWorkerTerm> terms) {
  double u = 0.0;
  for (const auto& t : terms) u += expected_worker_gain(t);
  return u;
}

double expected_task_gain(const ExpectedTaskTerm& t, double quality_weight, double settlement_weight) {
  const double b = t.completion_prob;
  return quality_weight / t.expected_age +
         settlement_weight * ((1.0 - b) * t.term.compensation - b * t.term.payment);
}

double expected_task_utility(std::span<const ExpectedTaskTerm> terms, double quality_weight,
                             double settlement_weight) {
  double u = 0.0;
  for (const auto& t : terms) u += expected_task_gain(t, quality_weight, settlement_weight);
  return u;
}

}  // namespace mcs
