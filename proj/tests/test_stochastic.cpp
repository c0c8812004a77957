#include <doctest.h>

#include <cmath>
#include <functional>

#include "mcs/core/rng.hpp"
#include "mcs/stochastic/completion.hpp"
#include "mcs/stochastic/risk.hpp"
#include "mcs/stochastic/sampling.hpp"

using namespace mcs;

namespace {

// Independent reference: walk every delay pattern slot by slot and every
// channel value, weighting each outcome by its probability.
double brute_completion(const CompletionModel& m, const DelayModel& d, const ChannelModel& c) {
  const int span = d.t_max - d.t_min + 1;
  double total = 0.0;
  std::function<void(int, int, double)> walk = [&](int slot, int delay, double weight) {
    if (slot == m.tau_move) {
      for (int z = c.mu1; z <= c.mu2; ++z) {
        const double rate = m.tx.bandwidth_hz * std::log2(1.0 + m.tx.transmit_power * z);
        const int tran = m.tx.data_bits <= 0.0 ? 0 : static_cast<int>(std::ceil(m.tx.data_bits / rate - 1e-12));
        const double arrive = std::max<double>(m.tau_move + delay, m.open_offset);
        if (arrive + m.tau_sense + tran <= m.deadline_slack + 1e-9) total += weight / (c.mu2 - c.mu1 + 1);
      }
      return;
    }
    walk(slot + 1, delay, weight * (1.0 - d.a));
    if (d.a > 0.0)
      for (int k = d.t_min; k <= d.t_max; ++k) walk(slot + 1, delay + k, weight * d.a / span);
  };
  walk(0, 0, 1.0);
  return total;
}

CompletionModel no_data_model(int tau_move, double slack) {
  CompletionModel m;
  m.tau_move = tau_move;
  m.deadline_slack = slack;
  m.tx = {0.0, 1.0, 1.0};
  return m;
}

}  // namespace

TEST_CASE("degenerate delay draws") {
  SeededRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    auto none = sample_delay(rng, 0.0, 1, 5);
    CHECK_FALSE(none.occurred);
    CHECK(none.duration == 0);
    auto fixed = sample_delay(rng, 1.0, 3, 3);
    CHECK(fixed.occurred);
    CHECK(fixed.duration == 3);
  }
}

TEST_CASE("delay duration averages the midpoint") {
  SeededRng rng(2);
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < 100000; ++i) {
    auto d = sample_delay(rng, 0.5, 1, 5);
    if (d.occurred) {
      sum += d.duration;
      ++n;
    }
  }
  CHECK(sum / n == doctest::Approx(3.0).epsilon(0.05 / 3.0));
}

TEST_CASE("channel draws") {
  SeededRng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    int g = sample_channel(rng, 150, 400);
    CHECK(g >= 150);
    CHECK(g <= 400);
    sum += g;
    CHECK(sample_channel(rng, 300, 300) == 300);
  }
  CHECK(std::abs(sum / 100000 - 275.0) < 1.0);
}

TEST_CASE("expectations of the uncertainty model") {
  auto e = expectations({0.01, 1, 5}, {150, 400});
  CHECK(e.alpha == 0.01);
  CHECK(e.delay_duration == 3.0);
  CHECK(e.channel == 275.0);
  CHECK(expectations({0.0, 2, 2}, {1, 1}).alpha == 0.0);
  CHECK(expectations({0.3, 2, 2}, {1, 1}).delay_duration == 2.0);
}

TEST_CASE("completion probability corner cases") {
  CompletionModel m;
  m.tau_move = 3;
  m.tau_sense = 1;
  m.tx = {6e6, 1e6, 0.5};
  const ChannelModel channel{10, 30};
  SUBCASE("no delays and every channel fits") {
    m.deadline_slack = 100;
    CHECK(completion_probability(m, {0.0, 1, 1}, channel, Enumerate{}) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("no channel value fits") {
    m.deadline_slack = 4;
    CHECK(completion_probability(m, {0.0, 1, 1}, channel, Enumerate{}) == 0.0);
  }
}

TEST_CASE("two slots with at most one unit delay complete with probability three quarters") {
  const auto m = no_data_model(2, 3.0);
  const DelayModel d{0.5, 1, 1};
  const ChannelModel c{5, 5};
  CHECK(completion_probability(m, d, c, Enumerate{}) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(completion_probability(m, d, c, Exact{}) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(brute_completion(m, d, c) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("enumeration, exact grouping and the reference agree") {
  SeededRng rng(17);
  for (int i = 0; i < 60; ++i) {
    CompletionModel m;
    m.tau_move = rng.uniform_int(0, 6);
    m.tau_sense = rng.uniform_int(0, 3);
    m.deadline_slack = m.tau_move + m.tau_sense + rng.uniform_int(0, 14);
    if (rng.bernoulli(0.5)) m.open_offset = rng.uniform_int(0, 8);
    m.tx = {rng.uniform(1e6, 4e6), 1e6, rng.uniform(0.4, 0.6)};
    const DelayModel d{rng.uniform(0.0, 0.5), 1, rng.uniform_int(1, 4)};
    const ChannelModel c{rng.uniform_int(1, 5), rng.uniform_int(6, 30)};
    const double ref = brute_completion(m, d, c);
    CHECK(completion_probability(m, d, c, Enumerate{}) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(completion_probability(m, d, c, Exact{}) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("scenario weights sum to one") {
  const CompletionModel m = no_data_model(5, 9.0);
  double mass = 0.0;
  for_each_tcs(m, {0.3, 1, 3}, {2, 9}, [&](const Tcs&, double w) { mass += w; });
  CHECK(std::abs(mass - 1.0) < 1e-9);
}

TEST_CASE("enumeration refuses paths beyond the cap") {
  const CompletionModel m = no_data_model(9, 20.0);
  CHECK_THROWS_AS(completion_probability(m, {0.1, 1, 2}, {1, 1}, Enumerate{}), CapExceeded);
  CHECK_NOTHROW(completion_probability(m, {0.1, 1, 2}, {1, 1}, MonteCarlo{1000, 1}));
  CHECK_NOTHROW(completion_probability(m, {0.1, 1, 2}, {1, 1}, Exact{}));
}

TEST_CASE("completion probability is monotone in delay rate and slack") {
  CompletionModel m = no_data_model(4, 7.0);
  m.tau_sense = 1;
  double prev = 1.0;
  for (double a = 0.0; a <= 1.0; a += 0.1) {
    double p = completion_probability(m, {a, 1, 3}, {1, 1}, Exact{});
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  prev = 0.0;
  for (int slack = 0; slack < 20; ++slack) {
    m.deadline_slack = slack;
    double p = completion_probability(m, {0.3, 1, 3}, {1, 1}, Exact{});
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("delay distribution mass and mean") {
  DelayDistribution dist({0.2, 1, 3}, 5);
  double mass = 0.0, mean = 0.0;
  for (int k = 0; k <= dist.max_total(); ++k) {
    mass += dist.pmf(k);
    mean += k * dist.pmf(k);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean == doctest::Approx(5 * 0.2 * 2.0).epsilon(1e-12));
  CHECK(dist.mean() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dist.cdf(-1) == 0.0);
  CHECK(dist.cdf(1000) == doctest::Approx(1.0));
}

TEST_CASE("worker utility gate") {
  CHECK(risk_gate_worker_utility(0.9, 1.0, 0.3));
  CHECK_FALSE(risk_gate_worker_utility(0.0, 1.0, 0.3));
  CHECK(risk_gate_worker_utility(0.0, 1.0, 1.0));
  CHECK(risk_gate_worker_utility(3.0, 1.0, 1.0));
}

TEST_CASE("completion gate is strict") {
  CHECK(risk_gate_completion(0.75, 0.3));
  CHECK_FALSE(risk_gate_completion(0.7, 0.3));
  CHECK(risk_gate_completion(1e-6, 1.0));
}

TEST_CASE("task quality gate") {
  CHECK(risk_gate_task_quality(9.0, 10.0, 0.3));
  CHECK_FALSE(risk_gate_task_quality(0.0, 10.0, 0.3));
  for (double rho : {0.01, 0.3, 1.0}) CHECK(risk_gate_task_quality(10.0, 10.0, rho));
}

TEST_CASE("risk gates never flip from pass to fail as rho grows") {
  SeededRng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double v = rng.uniform(0.0, 2.0);
    const double pr = rng.uniform01();
    bool u = false, c = false, q = false;
    for (double rho = 0.05; rho <= 1.0; rho += 0.05) {
      const bool u2 = risk_gate_worker_utility(v, 1.0, rho);
      const bool c2 = risk_gate_completion(pr, rho);
      const bool q2 = risk_gate_task_quality(v, 1.0, rho);
      CHECK((!u || u2));
      CHECK((!c || c2));
      CHECK((!q || q2));
      u = u2;
      c = c2;
      q = q2;
    }
  }
}
