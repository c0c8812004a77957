#include "mcs/sim/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "mcs/core/errors.hpp"

namespace mcs {

Scenario ScenarioSource::make(std::uint64_t replication_seed) const {
  if (fixed) return *fixed;
  return generate_scenario(gen, replication_seed);
}

std::uint64_t replication_seed(std::uint64_t base_seed, int replication) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(replication));
}

std::vector<ReplicationRow> MonteCarloResult::rows_of(Mechanism m) const {
  std::vector<ReplicationRow> out;
  for (const auto& r : rows)
    if (r.mechanism == m) out.push_back(r);
  return out;
}

MonteCarloResult run_monte_carlo(const ScenarioSource& source, const MonteCarloConfig& cfg,
                                 const ReplicationObserver& observe) {
  if (cfg.replications < 1) throw ConfigError("at least one replication is required");
  if (cfg.mechanisms.empty()) throw ConfigError("no mechanism selected");
  cfg.mechanism.validate();
  if (!source.fixed) source.gen.validate();

  const std::size_t nm = cfg.mechanisms.size();
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<ReplicationRow> slots(nm * reps);
  std::atomic<std::size_t> next{0};
  std::mutex observe_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= reps) return;
      try {
        const std::uint64_t seed = replication_seed(cfg.base_seed, static_cast<int>(rep));
        const Scenario s = source.make(seed);
        std::vector<MechanismRun> runs;
        for (std::size_t k = 0; k < nm; ++k) {
          runs.push_back(run_mechanism(cfg.mechanisms[k], s, cfg.mechanism, seed));
          auto& row = slots[k * reps + rep];
          row.mechanism = cfg.mechanisms[k];
          row.replication = static_cast<int>(rep);
          row.seed = seed;
          row.metrics = runs.back().metrics;
          row.conservation_error = runs.back().conservation_error;
        }
        if (observe) {
          std::lock_guard lock(observe_mutex);
          observe(static_cast<int>(rep), runs);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
        return;
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(cfg.parallel, static_cast<unsigned>(reps)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloResult out;
  out.rows = std::move(slots);
  for (std::size_t k = 0; k < nm; ++k) {
    std::vector<ReplicationMetrics> metrics;
    for (std::size_t rep = 0; rep < reps; ++rep) metrics.push_back(out.rows[k * reps + rep].metrics);
    out.summaries.push_back({cfg.mechanisms[k], compute_metrics(metrics)});
  }
  return out;
}

}  // namespace mcs
