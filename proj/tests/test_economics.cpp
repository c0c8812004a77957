#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcs/core/errors.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/economics/aoi.hpp"
#include "mcs/economics/costs.hpp"
#include "mcs/economics/utility.hpp"

using namespace mcs;

namespace {

WorkerSpec worker() {
  WorkerSpec w;
  w.sense_cost = 0.004;
  w.delay_cost = 0.1;
  w.transmit_power = 1.0;
  w.move_cost = 0.03;
  w.sense_rate = 512e6;
  w.speed = 150.0;
  return w;
}

TaskSpec task_at(double x, double bits) {
  TaskSpec t;
  t.loc = {x, 0.0};
  t.data_bits = bits;
  t.t_begin = 0;
  t.t_end = 50;
  return t;
}

}  // namespace

TEST_CASE("travel rounds movement up to whole slots") {
  const auto w = worker();
  auto a = travel(w, {0, 0}, task_at(300, 1));
  CHECK(a.tau_move == 2);
  CHECK(a.c_move == doctest::Approx(0.06));
  auto b = travel(w, {300, 0}, task_at(300, 1));
  CHECK(b.tau_move == 0);
  CHECK(b.c_move == 0.0);
  CHECK(travel(w, {0, 0}, task_at(301, 1)).tau_move == 3);
}

TEST_CASE("sensing and transmission times") {
  auto w = worker();
  auto st = service_times(w, task_at(0, 2048e6), 1.0, 6e6);
  CHECK(st.tau_sense == 4);
  CHECK(st.c_sense == doctest::Approx(0.016));

  // e_t * gamma = 100: rate 6e6 * log2(101) bits per slot.
  auto tr = service_times(w, task_at(0, 260e6), 100.0, 6e6);
  CHECK(tr.tau_tran == 7);
  CHECK(tr.c_tran == doctest::Approx(7.0));

  auto zero = service_times(w, task_at(0, 0.0), 100.0, 6e6);
  CHECK(zero.tau_sense == 0);
  CHECK(zero.tau_tran == 0);
  CHECK(zero.c_sense == 0.0);
  CHECK(zero.c_tran == 0.0);

  CHECK_THROWS_AS(service_times(w, task_at(0, 1e6), 0.0, 6e6), DomainError);
}

TEST_CASE("delay cost is linear in slots") {
  const auto w = worker();
  CHECK(delay_cost(w, 3) == doctest::Approx(0.3));
  CHECK(delay_cost(w, 0) == 0.0);
  for (int k = 0; k < 10; ++k) CHECK(delay_cost(w, 2 * k) == doctest::Approx(2 * delay_cost(w, k)));
}

TEST_CASE("total cost sums and weights the parts") {
  CostParts p;
  p.c_move = 0.06;
  p.c_delay = 0.3;
  p.c_sense = 0.016;
  p.c_tran = 0.02;
  p.tau_move = 2;
  p.tau_delay = 3;
  p.tau_sense = 4;
  p.tau_tran = 1;
  auto one = total_cost(p, 1.0);
  CHECK(one.total_cost == doctest::Approx(0.396));
  CHECK(one.total_time == 10);
  auto two = total_cost(p, 2.0);
  CHECK(two.total_cost == doctest::Approx(0.792));
  CHECK(two.total_time == 10);
  auto none = total_cost(CostParts{}, 1.0);
  CHECK(none.total_cost == 0.0);
  CHECK(none.total_time == 0);
}

TEST_CASE("age closed form matches direct summation") {
  CHECK(aoi(1, 2).age == 6.0);
  CHECK(aoi(1, 2).average == 2.0);
  CHECK(aoi(0, 0).age == 0.0);
  CHECK(aoi(0, 0).average == 0.5);
  for (int n = 0; n <= 100; ++n) {
    long sum = 0;
    for (int t = 0; t <= n; ++t) sum += t;
    for (int s = 0; s <= n; s += std::max(1, n / 3)) {
      const Aoi a = aoi(s, n - s);
      CHECK(a.age == static_cast<double>(sum));
      CHECK(a.average == (n + 1) / 2.0);
    }
  }
  CHECK(aoi(60, 40).age == 5050.0);
}

TEST_CASE("service quality sums inverse ages") {
  std::vector<double> ages{2.0, 4.0};
  CHECK(service_quality(ages) == doctest::Approx(0.75));
  CHECK(service_quality(std::vector<double>{}) == 0.0);
  std::vector<double> more{2.0, 4.0, 7.0};
  CHECK(service_quality(more) > service_quality(ages));
  std::vector<double> bad{2.0, 0.0};
  CHECK_THROWS_AS(service_quality(bad), DomainError);
}

TEST_CASE("realized worker utility") {
  WorkerSettlement done;
  done.outcome.completed = true;
  done.outcome.realized.total_cost = 0.4;
  done.term = {8.0, 4.0, TradeStage::futures};
  CHECK(worker_utility(std::vector{done}) == doctest::Approx(7.6));

  WorkerSettlement breach;
  breach.outcome.completed = false;
  breach.outcome.partial_cost = 0.2;
  breach.term = {8.0, 4.0, TradeStage::futures};
  CHECK(worker_utility(std::vector{breach}) == doctest::Approx(-4.2));
  CHECK(worker_utility(std::vector<WorkerSettlement>{}) == 0.0);
}

TEST_CASE("realized task utility") {
  TaskSettlement done{true, 2.0, {8.0, 4.0, TradeStage::futures}};
  CHECK(task_utility(std::vector{done}, 10.0, 0.5) == doctest::Approx(1.0));
  TaskSettlement breach{false, 2.0, {8.0, 4.0, TradeStage::futures}};
  CHECK(task_utility(std::vector{breach}, 10.0, 0.5) == doctest::Approx(2.0));
  CHECK(task_utility(std::vector<TaskSettlement>{}, 10.0, 0.5) == 0.0);
}

TEST_CASE("a breach lowers joint welfare when the price covers cost") {
  SeededRng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double cost = rng.uniform(0.1, 5.0);
    const double p = cost + rng.uniform(0.1, 5.0);
    const double q = rng.uniform(0.0, 1.0) * p;
    const double v3 = rng.uniform(0.0, 0.99);
    const double partial = rng.uniform(0.0, cost);
    WorkerSettlement wf{{true, {}, 0.0}, {p, q, TradeStage::futures}};
    wf.outcome.realized.total_cost = cost;
    WorkerSettlement wb{{false, {}, partial}, {p, q, TradeStage::futures}};
    TaskSettlement tf{true, 1.0, {p, q, TradeStage::futures}};
    TaskSettlement tb{false, 1.0, {p, q, TradeStage::futures}};
    const double fulfil = worker_utility(std::vector{wf}) + task_utility(std::vector{tf}, 10.0, v3);
    const double breach = worker_utility(std::vector{wb}) + task_utility(std::vector{tb}, 10.0, v3);
    CHECK(breach < fulfil);
  }
}

TEST_CASE("expected cost") {
  auto w = worker();
  w.transmit_power = 0.5;
  const auto t = task_at(450, 100e6);
  SUBCASE("degenerate distributions equal the deterministic cost") {
    ExpectationInputs in{{0.0, 1, 5}, {200, 200}, 1.0, 6e6};
    const auto tr = travel(w, {0, 0}, t);
    const auto st = service_times(w, t, 200, 6e6);
    CostParts p;
    p.c_move = tr.c_move;
    p.c_sense = st.c_sense;
    p.c_tran = st.c_tran;
    CHECK(expected_cost(w, t, Location{0, 0}, in) == doctest::Approx(total_cost(p, 1.0).total_cost));
  }
  SUBCASE("certain fixed delays add e_D times the delayed slots") {
    ExpectationInputs with{{1.0, 2, 2}, {200, 200}, 1.0, 6e6};
    ExpectationInputs without{{0.0, 2, 2}, {200, 200}, 1.0, 6e6};
    CHECK(expected_cost(w, t, 3, with) - expected_cost(w, t, 3, without) == doctest::Approx(w.delay_cost * 6));
  }
  SUBCASE("never below the best case") {
    ExpectationInputs in{{0.01, 1, 5}, {150, 400}, 1.0, 6e6};
    const auto tr = travel(w, {0, 0}, t);
    const auto st = service_times(w, t, 400, 6e6);
    CHECK(expected_cost(w, t, Location{0, 0}, in) >= tr.c_move + st.c_sense + st.c_tran - 1e-12);
  }
}

TEST_CASE("expected worker utility") {
  ExpectedWorkerTerm sure{1.0, 0.4, {8.0, 4.0, TradeStage::futures}};
  CHECK(expected_worker_utility(std::vector{sure}) == doctest::Approx(7.6));
  ExpectedWorkerTerm never{0.0, 0.4, {8.0, 4.0, TradeStage::futures}};
  CHECK(expected_worker_utility(std::vector{never}) == doctest::Approx(-4.4));
  ExpectedWorkerTerm mixed{0.75, 0.4, {8.0, 4.0, TradeStage::futures}};
  CHECK(expected_worker_utility(std::vector{mixed}) == doctest::Approx(4.6));

  double prev = -1e9;
  for (double p = 1.0; p < 10.0; p += 0.5) {
    double u = expected_worker_gain({0.8, 0.4, {p, 2.0, TradeStage::futures}});
    CHECK(u > prev);
    prev = u;
  }
  prev = 1e9;
  for (double q = 0.0; q < 5.0; q += 0.5) {
    double u = expected_worker_gain({0.8, 0.4, {8.0, q, TradeStage::futures}});
    CHECK(u < prev);
    prev = u;
  }
}

TEST_CASE("expected task utility") {
  ExpectedTaskTerm one{1.0, 2.0, {8.0, 4.0, TradeStage::futures}};
  CHECK(expected_task_utility(std::vector{one}, 10.0, 0.5) == doctest::Approx(1.0));
  CHECK(expected_task_utility(std::vector<ExpectedTaskTerm>{}, 10.0, 0.5) == 0.0);
  // The quality term stays in the expectation even when completion is impossible.
  ExpectedTaskTerm lost{0.0, 2.0, {8.0, 4.0, TradeStage::futures}};
  CHECK(expected_task_utility(std::vector{lost}, 10.0, 0.5) == doctest::Approx(5.0 + 2.0));
}

TEST_CASE("expected age uses the mean channel") {
  auto w = worker();
  w.transmit_power = 0.5;
  w.sense_rate = 400e6;
  const auto t = task_at(0, 100e6);
  // gamma = 275, rate = 6e6 * log2(1 + 137.5) ~ 42.6e6, so 3 transmission slots; 1 sensing slot.
  CHECK(expected_transmission_slots(w, t, {150, 400}, 6e6) == 3);
  CHECK(expected_average_age(w, t, {150, 400}, 6e6) == doctest::Approx(2.5));
}
