#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcs/core/rng.hpp"
#include "mcs/planner/path_model.hpp"

namespace mcs {

struct AcoConfig {
  double eps1 = 1.0;  // pheromone
  double eps2 = 1.0;  // distance heuristic
  double eps3 = 1.0;  // window width
  double eps4 = 1.0;  // waiting time
  int ants = 20;
  int iter_max = 100;
  double theta = 0.1;
  double tau0 = 1e4;  // large against per-iteration deposits, so early iterations explore
  bool inverse_distance_heuristic = true;

  double tau_floor() const { return 1e-6 * tau0; }
  void validate() const;
};

// Complete graph rooted at the worker's start (vertex 0); vertex k > 0 is
// tasks[k - 1].
struct TaskGraph {
  PlanStart start;
  std::vector<std::size_t> tasks;
  std::vector<double> eta;       // (n+1) x (n+1) distances
  std::vector<int> tau_move;     // (n+1) x (n+1) movement slots
  std::vector<double> width;     // per vertex, t_e - t_b (index 0 unused)

  std::size_t vertices() const { return tasks.size() + 1; }
  double distance(std::size_t m, std::size_t n) const { return eta[m * vertices() + n]; }
  int moves(std::size_t m, std::size_t n) const { return tau_move[m * vertices() + n]; }
};

TaskGraph build_task_graph(const PathModel& model, const PlanStart& start, std::span<const std::size_t> tasks);

class Pheromone {
 public:
  Pheromone(std::size_t vertices, double tau0, double floor);

  double& operator()(std::size_t m, std::size_t n) { return tau_[m * n_ + n]; }
  double operator()(std::size_t m, std::size_t n) const { return tau_[m * n_ + n]; }
  std::size_t vertices() const { return n_; }
  double floor() const { return floor_; }

 private:
  std::size_t n_;
  double floor_;
  std::vector<double> tau_;
};

struct AntRun {
  std::vector<std::size_t> vertices;  // visited graph vertices, in order
  std::vector<StepEstimate> steps;
  double utility = 0.0;
  std::size_t current = 0;
  double clock = 0.0;
  std::vector<bool> visited;
};

AntRun start_run(const TaskGraph& graph);

struct Candidate {
  std::size_t vertex = 0;
  StepEstimate estimate;
};

// Unvisited vertices whose hop from the run's position is feasible.
std::vector<Candidate> feasible_set(const AntRun& run, const TaskGraph& graph, const PathModel& model,
                                    std::span<const double> prices, const PlanningRules& rules);

std::vector<double> transition_probabilities(const AntRun& run, std::span<const Candidate> feasible,
                                             const TaskGraph& graph, const Pheromone& pheromone,
                                             const AcoConfig& cfg);

void update_pheromone(Pheromone& pheromone, const AntRun& best, double theta);

struct AcoResult {
  std::vector<StepEstimate> path;
  double utility = 0.0;
  std::vector<double> best_by_iteration;

  std::vector<std::size_t> order() const;
};

AcoResult run_aco(const PathModel& model, const PlanStart& start, std::span<const std::size_t> tasks,
                  std::span<const double> prices, const PlanningRules& rules, const AcoConfig& cfg,
                  std::uint64_t seed);

}  // namespace mcs
