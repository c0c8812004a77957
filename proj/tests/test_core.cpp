#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "mcs/core/errors.hpp"
#include "mcs/core/generator.hpp"
#include "mcs/core/rng.hpp"
#include "mcs/core/scenario.hpp"
#include "mcs/core/scenario_json.hpp"
#include "mcs/core/worker_csv.hpp"

using namespace mcs;

TEST_CASE("generated scenario follows the default ranges") {
  const Scenario s = generate_scenario(GenConfig::defaults(), 1);
  CHECK(s.horizon == 100);
  CHECK(s.tasks.size() == 10);
  CHECK(s.workers.size() == 15);
  for (const auto& t : s.tasks) {
    CHECK(t.budget >= 30.0);
    CHECK(t.budget <= 45.0);
    CHECK(t.t_begin < t.t_end);
    CHECK(t.t_end <= s.horizon);
  }
  for (const auto& w : s.workers) {
    CHECK(w.speed >= 100.0);
    CHECK(w.speed <= 200.0);
  }
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("generation is deterministic in the seed") {
  const auto cfg = GenConfig::defaults();
  CHECK(generate_scenario(cfg, 7) == generate_scenario(cfg, 7));
  CHECK_FALSE(generate_scenario(cfg, 7) == generate_scenario(cfg, 8));
}

TEST_CASE("zero tasks is a valid scenario") {
  GenConfig cfg;
  cfg.n_tasks = 0;
  const Scenario s = generate_scenario(cfg, 3);
  CHECK(s.tasks.empty());
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("bad generator ranges are rejected") {
  GenConfig cfg;
  cfg.budget = {50.0, 10.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("validation reports each broken invariant once") {
  Scenario s = generate_scenario(GenConfig::defaults(), 2);
  SUBCASE("empty window") {
    s.tasks[0].t_end = s.tasks[0].t_begin;
    CHECK(validate_scenario(s).size() == 1);
  }
  SUBCASE("duplicate worker id") {
    s.workers[1].id = s.workers[0].id;
    CHECK(validate_scenario(s).size() == 1);
  }
  SUBCASE("require_valid throws") {
    s.horizon = 0;
    CHECK_THROWS_AS(require_valid(s), ValidationError);
  }
}

TEST_CASE("worker CSV rows load in order") {
  std::istringstream in(
      "id,lon,lat,speed,e_c,e_D,e_t,e_m,f\n"
      "4,10,20,150,0.004,0.1,0.5,0.03,400e6\n"
      "9,11,21,120,0.004,0.1,0.5,0.03,400e6\n"
      "2,12,22,180,0.004,0.1,0.5,0.03,400e6\n");
  const auto ws = parse_worker_csv(in);
  REQUIRE(ws.size() == 3);
  CHECK(ws[0].id == 4);
  CHECK(ws[1].id == 9);
  CHECK(ws[2].id == 2);
  CHECK(ws[2].speed == 180.0);
  CHECK(ws[0].start == Location{10.0, 20.0});
}

TEST_CASE("worker CSV with zero speed names the offending row") {
  std::istringstream in(
      "id,lon,lat,speed,e_c,e_D,e_t,e_m,f\n"
      "1,0,0,150,0.004,0.1,0.5,0.03,400e6\n"
      "2,0,0,0,0.004,0.1,0.5,0.03,400e6\n");
  try {
    parse_worker_csv(in);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("worker CSV with only a header is empty") {
  std::istringstream in("id,lon,lat,speed,e_c,e_D,e_t,e_m,f\n");
  CHECK(parse_worker_csv(in).empty());
}

TEST_CASE("worker CSV parse errors carry the line") {
  std::istringstream in("id,lon,lat,speed,e_c,e_D,e_t,e_m,f\n1,0,zero,150,0.004,0.1,0.5,0.03,400e6\n");
  try {
    parse_worker_csv(in);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("CSV workers replace generated ones") {
  std::istringstream in("id,lon,lat,speed,e_c,e_D,e_t,e_m,f\n5,1,1,150,0.004,0.1,0.5,0.03,400e6\n");
  const auto ws = parse_worker_csv(in);
  const Scenario s = generate_scenario(GenConfig::defaults(), 1, ws);
  REQUIRE(s.workers.size() == 1);
  CHECK(s.workers[0].id == 5);
  CHECK(s.econ.p_desire.workers() == 1);
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("distance is a metric") {
  SeededRng rng(11);
  for (int i = 0; i < 200; ++i) {
    Location a{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
    Location b{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
    Location c{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)};
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, b) >= 0.0);
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
  }
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("substreams depend only on the path") {
  SeededRng a(42), b(42);
  a.uniform01();
  a.uniform01();
  CHECK(a.substream("x").seed() == b.substream("x").seed());
  CHECK(a.substream("x").substream(3).seed() == b.substream("x").substream(3).seed());
  CHECK(a.substream("x").seed() != a.substream("y").seed());
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("scenario JSON round trip is exact") {
  const Scenario s = generate_scenario(GenConfig::defaults(), 5);
  CHECK(scenario_from_json(to_json(s)) == s);
  const auto path = std::filesystem::temp_directory_path() / "mcs_core_roundtrip.json";
  save_scenario(s, path);
  CHECK(load_scenario(path) == s);
  std::filesystem::remove(path);
}

TEST_CASE("generator config JSON keeps missing keys at defaults") {
  const GenConfig g = gen_config_from_json(nlohmann::json{{"n_tasks", 4}});
  CHECK(g.n_tasks == 4);
  CHECK(g.n_workers == GenConfig::defaults().n_workers);
}
