#pragma once

#include <span>

#include "mcs/core/types.hpp"
#include "mcs/economics/costs.hpp"

namespace mcs {

enum class TradeStage { futures, spot };

struct ContractTerm {
  double payment = 0.0;       // p
  double compensation = 0.0;  // q, owed by the worker on breach
  TradeStage stage = TradeStage::futures;
};

struct OutcomeRecord {
  bool completed = false;
  CostBreakdown realized;
  double partial_cost = 0.0;  // cost sunk before an abandonment or failure
};

struct WorkerSettlement {
  OutcomeRecord outcome;
  ContractTerm term;
};

// sum beta (p - c) - sum (1 - beta)(c_part + q)
double worker_utility(std::span<const WorkerSettlement> settlements);

struct TaskSettlement {
  bool completed = false;
  double average_age = 1.0;
  ContractTerm term;
};

// V2 * sum over completed workers of 1/AGE + V3 * sum((1 - beta) q - beta p)
double task_utility(std::span<const TaskSettlement> settlements, double quality_weight, double settlement_weight);

struct ExpectationInputs {
  DelayModel delay;
  ChannelModel channel;
  double cost_weight = 1.0;
  double bandwidth_hz = 6e6;
};

// Transmission slots at the mean channel value.
int expected_transmission_slots(const WorkerSpec& worker, const TaskSpec& task, const ChannelModel& channel,
                                double bandwidth_hz);

// Cost with delays and channel replaced by their means; tau_move is measured
// from `from`.
double expected_cost(const WorkerSpec& worker, const TaskSpec& task, const Location& from,
                     const ExpectationInputs& in);
double expected_cost(const WorkerSpec& worker, const TaskSpec& task, int tau_move, const ExpectationInputs& in);

// (tau_sense + E[tau_tran] + 1) / 2
double expected_average_age(const WorkerSpec& worker, const TaskSpec& task, const ChannelModel& channel,
                            double bandwidth_hz);

struct ExpectedWorkerTerm {
  double completion_prob = 1.0;
  double expected_cost = 0.0;
  ContractTerm term;
};

// sum E[beta](p - E[c]) - sum (1 - E[beta])(E[c] + q)
double expected_worker_utility(std::span<const ExpectedWorkerTerm> terms);
double expected_worker_gain(const ExpectedWorkerTerm& t);

struct ExpectedTaskTerm {
  double completion_prob = 1.0;
  double expected_age = 1.0;
  ContractTerm term;
};

// V2 * sum 1/E[AGE] + V3 * sum((1 - E[beta]) q - E[beta] p)
double expected_task_utility(std::span<const ExpectedTaskTerm> terms, double quality_weight,
                             double settlement_weight);
double expected_task_gain(const ExpectedTaskTerm& t, double quality_weight, double settlement_weight);

}  // namespace mcs
