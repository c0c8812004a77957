#include "mcs/core/scenario_json.hpp"

#include <fstream>

#include "mcs/core/errors.hpp"

namespace mcs {

using nlohmann::json;

namespace {

json table_to_json(const PairTable<double>& t) {
  json rows = json::array();
  for (std::size_t w = 0; w < t.workers(); ++w) {
    json row = json::array();
    for (std::size_t s = 0; s < t.tasks(); ++s) row.push_back(t(w, s));
    rows.push_back(row);
  }
  return rows;
}

PairTable<double> table_from_json(const json& j, std::size_t workers, std::size_t tasks, const char* name) {
  PairTable<double> t(workers, tasks);
  if (j.is_number()) {
    for (std::size_t w = 0; w < workers; ++w)
      for (std::size_t s = 0; s < tasks; ++s) t(w, s) = j.get<double>();
    return t;
  }
  if (!j.is_array() || j.size() != workers)
    throw ParseError(std::string(name) + ": expected one row per worker", 0);
  for (std::size_t w = 0; w < workers; ++w) {
    const auto& row = j[w];
    if (row.is_number()) {
      for (std::size_t s = 0; s < tasks; ++s) t(w, s) = row.get<double>();
      continue;
    }
    if (!row.is_array() || row.size() != tasks)
      throw ParseError(std::string(name) + ": expected one column per task", 0);
    for (std::size_t s = 0; s < tasks; ++s) t(w, s) = row[s].get<double>();
  }
  return t;
}

json loc_json(const Location& l) { return json{{"lon", l.lon}, {"lat", l.lat}}; }
Location loc_from(const json& j) { return {j.at("lon").get<double>(), j.at("lat").get<double>()}; }

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }
json range_json(const IntRange& r) { return json::array({r.lo, r.hi}); }

template <typename R>
void read_range(const json& j, const char* key, R& r) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(std::string(key) + ": expected [lo, hi]");
  r.lo = v[0].get<decltype(r.lo)>();
  r.hi = v[1].get<decltype(r.hi)>();
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const Scenario& s) {
  json tasks = json::array();
  for (const auto& t : s.tasks)
    tasks.push_back({{"id", t.id},
                     {"t_b", t.t_begin},
                     {"t_e", t.t_end},
                     {"B", t.budget},
                     {"Q_D", t.desired_quality},
                     {"loc", loc_json(t.loc)},
                     {"d", t.data_bits}});
  json workers = json::array();
  for (const auto& w : s.workers)
    workers.push_back({{"id", w.id},
                       {"e_c", w.sense_cost},
                       {"e_D", w.delay_cost},
                       {"e_t", w.transmit_power},
                       {"e_m", w.move_cost},
                       {"f", w.sense_rate},
                       {"v", w.speed},
                       {"loc0", loc_json(w.start)}});
  const auto& u = s.uncertainty;
  const auto& e = s.econ;
  return {{"schema_version", kSchemaVersion},
          {"T", s.horizon},
          {"seed", s.seed},
          {"tasks", tasks},
          {"workers", workers},
          {"uncertainty",
           {{"a", table_to_json(u.delay_prob)}, {"t_min", u.t_min}, {"t_max", u.t_max}, {"mu1", u.mu1}, {"mu2", u.mu2}}},
          {"econ",
           {{"V1", e.cost_weight},
            {"V2", e.quality_weight},
            {"V3", e.settlement_weight},
            {"u_min", e.u_min},
            {"rho", e.rho},
            {"dp", e.dp},
            {"p_desire", table_to_json(e.p_desire)},
            {"W", e.bandwidth_hz},
            {"q_frac", e.q_frac}}}};
}

Scenario scenario_from_json(const json& j) {
  try {
    Scenario s;
    s.horizon = j.at("T").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    for (const auto& t : j.at("tasks")) {
      TaskSpec ts;
      ts.id = t.at("id").get<int>();
      ts.t_begin = t.at("t_b").get<int>();
      ts.t_end = t.at("t_e").get<int>();
      ts.budget = t.at("B").get<double>();
      ts.desired_quality = t.at("Q_D").get<double>();
      ts.loc = loc_from(t.at("loc"));
      ts.data_bits = t.at("d").get<double>();
      s.tasks.push_back(ts);
    }
    for (const auto& w : j.at("workers")) {
      WorkerSpec ws;
      ws.id = w.at("id").get<int>();
      ws.sense_cost = w.at("e_c").get<double>();
      ws.delay_cost = w.at("e_D").get<double>();
      ws.transmit_power = w.at("e_t").get<double>();
      ws.move_cost = w.at("e_m").get<double>();
      ws.sense_rate = w.at("f").get<double>();
      ws.speed = w.at("v").get<double>();
      ws.start = loc_from(w.at("loc0"));
      s.workers.push_back(ws);
    }
    const std::size_t nw = s.workers.size(), nt = s.tasks.size();
    const auto& u = j.at("uncertainty");
    s.uncertainty.delay_prob = table_from_json(u.at("a"), nw, nt, "uncertainty.a");
    s.uncertainty.t_min = u.at("t_min").get<int>();
    s.uncertainty.t_max = u.at("t_max").get<int>();
    s.uncertainty.mu1 = u.at("mu1").get<int>();
    s.uncertainty.mu2 = u.at("mu2").get<int>();
    const auto& e = j.at("econ");
    s.econ.cost_weight = e.at("V1").get<double>();
    s.econ.quality_weight = e.at("V2").get<double>();
    s.econ.settlement_weight = e.at("V3").get<double>();
    s.econ.u_min = e.at("u_min").get<double>();
    const auto& rho = e.at("rho");
    if (rho.is_number()) {
      s.econ.rho.fill(rho.get<double>());
    } else {
      if (rho.size() != 5) throw ParseError("econ.rho: expected 5 values", 0);
      for (std::size_t k = 0; k < 5; ++k) s.econ.rho[k] = rho[k].get<double>();
    }
    s.econ.dp = e.at("dp").get<double>();
    s.econ.p_desire = table_from_json(e.at("p_desire"), nw, nt, "econ.p_desire");
    s.econ.bandwidth_hz = e.at("W").get<double>();
    s.econ.q_frac = e.at("q_frac").get<double>();
    return s;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("scenario json: ") + ex.what(), 0);
  }
}

json to_json(const GenConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"n_tasks", c.n_tasks},
          {"n_workers", c.n_workers},
          {"T", c.horizon},
          {"region_width", c.region_width},
          {"region_height", c.region_height},
          {"t_b", range_json(c.t_begin)},
          {"window", range_json(c.window)},
          {"B", range_json(c.budget)},
          {"Q_D", range_json(c.desired_quality)},
          {"d", range_json(c.data_bits)},
          {"e_c", range_json(c.sense_cost)},
          {"e_D", range_json(c.delay_cost)},
          {"e_t", range_json(c.transmit_power)},
          {"e_m", range_json(c.move_cost)},
          {"f", range_json(c.sense_rate)},
          {"v", range_json(c.speed)},
          {"a", range_json(c.delay_prob)},
          {"t_min", c.t_min},
          {"t_max", c.t_max},
          {"mu1", c.mu1},
          {"mu2", c.mu2},
          {"p_desire", range_json(c.p_desire)},
          {"price_tick", c.price_tick},
          {"V1", c.cost_weight},
          {"V2", c.quality_weight},
          {"V3", c.settlement_weight},
          {"u_min", c.u_min},
          {"rho", c.rho},
          {"dp", c.dp},
          {"W", c.bandwidth_hz},
          {"q_frac", c.q_frac}};
}

GenConfig gen_config_from_json(const json& j) {
  GenConfig c;
  try {
    if (j.value("preset", std::string("default")) == "literal") c = GenConfig::literal_units();
    read(j, "n_tasks", c.n_tasks);
    read(j, "n_workers", c.n_workers);
    read(j, "T", c.horizon);
    read(j, "region_width", c.region_width);
    read(j, "region_height", c.region_height);
    read_range(j, "t_b", c.t_begin);
    read_range(j, "window", c.window);
    read_range(j, "B", c.budget);
    read_range(j, "Q_D", c.desired_quality);
    read_range(j, "d", c.data_bits);
    read_range(j, "e_c", c.sense_cost);
    read_range(j, "e_D", c.delay_cost);
    read_range(j, "e_t", c.transmit_power);
    read_range(j, "e_m", c.move_cost);
    read_range(j, "f", c.sense_rate);
    read_range(j, "v", c.speed);
    read_range(j, "a", c.delay_prob);
    read(j, "t_min", c.t_min);
    read(j, "t_max", c.t_max);
    read(j, "mu1", c.mu1);
    read(j, "mu2", c.mu2);
    read_range(j, "p_desire", c.p_desire);
    read(j, "price_tick", c.price_tick);
    read(j, "V1", c.cost_weight);
    read(j, "V2", c.quality_weight);
    read(j, "V3", c.settlement_weight);
    read(j, "u_min", c.u_min);
    read(j, "rho", c.rho);
    read(j, "dp", c.dp);
    read(j, "W", c.bandwidth_hz);
    read(j, "q_frac", c.q_frac);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("generator config: ") + ex.what());
  }
  c.validate();
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ParseError(path.string() + ": " + ex.what(), 0);
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const Scenario& s, const std::filesystem::path& path) { write_json_file(to_json(s), path); }

}  // namespace mcs
