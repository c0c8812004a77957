#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mcs {

// Planar coordinates in meters.
struct Location {
  double lon = 0.0;
  double lat = 0.0;

  bool operator==(const Location&) const = default;
};

double distance(const Location& a, const Location& b);

struct TaskSpec {
  int id = 0;
  int t_begin = 0;
  int t_end = 0;
  double budget = 0.0;
  double desired_quality = 0.0;
  Location loc;
  double data_bits = 0.0;

  bool operator==(const TaskSpec&) const = default;
};

struct WorkerSpec {
  int id = 0;
  double sense_cost = 0.0;     // e_c, currency per sensing slot
  double delay_cost = 0.0;     // e_D, currency per delayed slot
  double transmit_power = 0.0; // e_t, watts; also the transmission cost rate
  double move_cost = 0.0;      // e_m, currency per movement slot
  double sense_rate = 0.0;     // f, bits per slot
  double speed = 0.0;          // v, meters per slot
  Location start;

  bool operator==(const WorkerSpec&) const = default;
};

// Dense (worker, task) table.
template <typename T>
class PairTable {
 public:
  PairTable() = default;
  PairTable(std::size_t workers, std::size_t tasks, T fill = T{})
      : workers_(workers), tasks_(tasks), data_(workers * tasks, fill) {}

  T& operator()(std::size_t w, std::size_t s) { return data_[w * tasks_ + s]; }
  const T& operator()(std::size_t w, std::size_t s) const { return data_[w * tasks_ + s]; }

  std::size_t workers() const { return workers_; }
  std::size_t tasks() const { return tasks_; }
  bool operator==(const PairTable&) const = default;

 private:
  std::size_t workers_ = 0;
  std::size_t tasks_ = 0;
  std::vector<T> data_;
};

struct DelayModel {
  double a = 0.0;  // per-slot delay probability
  int t_min = 1;
  int t_max = 1;
};

struct ChannelModel {
  int mu1 = 1;
  int mu2 = 1;
};

struct UncertaintyParams {
  PairTable<double> delay_prob;
  int t_min = 1;
  int t_max = 5;
  int mu1 = 150;
  int mu2 = 400;

  DelayModel delay(std::size_t w, std::size_t s) const { return {delay_prob(w, s), t_min, t_max}; }
  ChannelModel channel() const { return {mu1, mu2}; }
  bool operator==(const UncertaintyParams&) const = default;
};

struct EconomicConfig {
  double cost_weight = 1.0;        // V1
  double quality_weight = 10.0;    // V2
  double settlement_weight = 0.5;  // V3
  double u_min = 0.1;
  std::array<double, 5> rho{0.3, 0.3, 0.3, 0.3, 0.3};
  double dp = 0.5;
  PairTable<double> p_desire;
  double bandwidth_hz = 6e6;
  double q_frac = 0.5;

  bool operator==(const EconomicConfig&) const = default;
};

struct Scenario {
  std::vector<TaskSpec> tasks;
  std::vector<WorkerSpec> workers;
  UncertaintyParams uncertainty;
  EconomicConfig econ;
  int horizon = 100;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

}  // namespace mcs
