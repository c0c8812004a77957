#include "mcs/matching/matching_json.hpp"

#include <algorithm>

#include "mcs/core/errors.hpp"
#include "mcs/core/scenario_json.hpp"

namespace mcs {

using nlohmann::json;

namespace {

const char* status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::absent: return "absent";
    case TaskStatus::matched: return "matched";
    case TaskStatus::withdrawn: return "withdrawn";
    case TaskStatus::unmatched: return "unmatched";
  }
  return "absent";
}

TaskStatus status_from(const std::string& s) {
  if (s == "matched") return TaskStatus::matched;
  if (s == "withdrawn") return TaskStatus::withdrawn;
  if (s == "unmatched") return TaskStatus::unmatched;
  if (s == "absent") return TaskStatus::absent;
  throw ParseError("unknown task status '" + s + "'", 0);
}

std::size_t index_in(const json& j, const char* key, std::size_t bound) {
  auto v = j.at(key).get<std::size_t>();
  if (v >= bound) throw ParseError(std::string(key) + " index out of range", 0);
  return v;
}

}  // namespace

json to_json(const Matching& m) {
  json tasks = json::array();
  for (std::size_t t = 0; t < m.status.size(); ++t) {
    json props = json::array();
    for (const auto& p : m.final_proposals[t])
      props.push_back({{"worker", p.worker},
                       {"price", p.price},
                       {"completion_prob", p.completion_prob},
                       {"expected_age", p.expected_age},
                       {"expected_cost", p.expected_cost},
                       {"worker_gain", p.worker_gain},
                       {"task_gain", p.task_gain},
                       {"accepted", p.accepted}});
    tasks.push_back({{"task", t},
                     {"status", status_name(m.status[t])},
                     {"in_market", static_cast<bool>(m.task_in_market[t])},
                     {"budget", m.budgets[t]},
                     {"workers", m.task_workers[t]},
                     {"final_proposals", props}});
  }
  json workers = json::array();
  for (std::size_t w = 0; w < m.worker_paths.size(); ++w) {
    json asked = json::array();
    for (std::size_t t = 0; t < m.status.size(); ++t) asked.push_back(m.asked(w, t));
    workers.push_back({{"worker", w},
                       {"in_market", static_cast<bool>(m.worker_in_market[w])},
                       {"start", {{"lon", m.starts[w].loc.lon}, {"lat", m.starts[w].loc.lat}, {"clock", m.starts[w].clock}}},
                       {"path", m.worker_paths[w]},
                       {"asked", asked}});
  }
  json contracts = json::array();
  for (const auto& [key, term] : m.contracts)
    contracts.push_back({{"task", key.first}, {"worker", key.second}, {"p", term.payment}, {"q", term.compensation}});
  return {{"schema_version", kSchemaVersion},
          {"stage", m.stage == TradeStage::futures ? "futures" : "spot"},
          {"rounds", m.rounds},
          {"phases", m.phases},
          {"converged", m.converged},
          {"messages",
           {{"proposals", m.messages.proposals}, {"replies", m.messages.replies}, {"price_updates", m.messages.price_updates}}},
          {"rules",
           {{"risk_gates", m.rules.risk_gates},
            {"time_windows", m.rules.time_windows},
            {"u_min", m.rules.u_min},
            {"rho_utility", m.rules.rho_utility},
            {"rho_completion", m.rules.rho_completion},
            {"q_frac", m.rules.q_frac}}},
          {"quality_gate", m.quality_gate},
          {"quality_rho", m.quality_rho},
          {"price_tick", m.price_tick},
          {"tasks", tasks},
          {"workers", workers},
          {"contracts", contracts}};
}

Matching matching_from_json(const json& j, const Scenario& s) {
  try {
    const std::size_t nt = s.tasks.size(), nw = s.workers.size();
    Matching m = empty_matching(s, j.at("stage").get<std::string>() == "spot" ? TradeStage::spot : TradeStage::futures);
    m.rounds = j.value("rounds", 0);
    m.phases = j.value("phases", 0);
    m.converged = j.value("converged", true);
    if (j.contains("messages")) {
      const auto& msg = j.at("messages");
      m.messages.proposals = msg.value("proposals", std::size_t{0});
      m.messages.replies = msg.value("replies", std::size_t{0});
      m.messages.price_updates = msg.value("price_updates", std::size_t{0});
    }
    const auto& r = j.at("rules");
    m.rules.risk_gates = r.at("risk_gates").get<bool>();
    m.rules.time_windows = r.at("time_windows").get<bool>();
    m.rules.u_min = r.at("u_min").get<double>();
    m.rules.rho_utility = r.at("rho_utility").get<double>();
    m.rules.rho_completion = r.at("rho_completion").get<double>();
    m.rules.q_frac = r.at("q_frac").get<double>();
    m.quality_gate = j.at("quality_gate").get<bool>();
    m.quality_rho = j.at("quality_rho").get<double>();
    m.price_tick = j.value("price_tick", 0.1);

    const auto& tasks = j.at("tasks");
    if (tasks.size() != nt) throw ParseError("matching has a different task count than the scenario", 0);
    for (const auto& tj : tasks) {
      std::size_t t = index_in(tj, "task", nt);
      m.status[t] = status_from(tj.at("status").get<std::string>());
      m.task_in_market[t] = tj.at("in_market").get<bool>();
      m.budgets[t] = tj.at("budget").get<double>();
      m.task_workers[t] = tj.at("workers").get<std::vector<std::size_t>>();
      std::sort(m.task_workers[t].begin(), m.task_workers[t].end());
      for (const auto& pj : tj.value("final_proposals", json::array())) {
        Proposal p;
        p.worker = index_in(pj, "worker", nw);
        p.price = pj.at("price").get<double>();
        p.completion_prob = pj.at("completion_prob").get<double>();
        p.expected_age = pj.at("expected_age").get<double>();
        p.expected_cost = pj.at("expected_cost").get<double>();
        p.worker_gain = pj.at("worker_gain").get<double>();
        p.task_gain = pj.at("task_gain").get<double>();
        p.accepted = pj.at("accepted").get<bool>();
        m.final_proposals[t].push_back(p);
      }
    }
    const auto& workers = j.at("workers");
    if (workers.size() != nw) throw ParseError("matching has a different worker count than the scenario", 0);
    for (const auto& wj : workers) {
      std::size_t w = index_in(wj, "worker", nw);
      m.worker_in_market[w] = wj.at("in_market").get<bool>();
      const auto& st = wj.at("start");
      m.starts[w] = {{st.at("lon").get<double>(), st.at("lat").get<double>()}, st.at("clock").get<double>()};
      m.worker_paths[w] = wj.at("path").get<std::vector<std::size_t>>();
      const auto& asked = wj.at("asked");
      if (asked.size() != nt) throw ParseError("asked prices need one entry per task", 0);
      for (std::size_t t = 0; t < nt; ++t) m.asked(w, t) = asked[t].get<double>();
    }
    for (const auto& cj : j.at("contracts")) {
      std::size_t t = index_in(cj, "task", nt), w = index_in(cj, "worker", nw);
      m.contracts[{t, w}] = {cj.at("p").get<double>(), cj.at("q").get<double>(), m.stage};
    }
    // Mutual consistency: s in phi(w) iff w in phi(s), each backed by a contract.
    for (std::size_t w = 0; w < nw; ++w)
      for (std::size_t t : m.worker_paths[w]) {
        if (t >= nt || !std::binary_search(m.task_workers[t].begin(), m.task_workers[t].end(), w) ||
            !m.contract(t, w))
          throw ValidationError("matching is not mutually consistent at worker " + std::to_string(w));
      }
    for (std::size_t t = 0; t < nt; ++t)
      for (std::size_t w : m.task_workers[t])
        if (w >= nw ||
            std::find(m.worker_paths[w].begin(), m.worker_paths[w].end(), t) == m.worker_paths[w].end())
          throw ValidationError("matching is not mutually consistent at task " + std::to_string(t));
    return m;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("matching json: ") + ex.what(), 0);
  }
}

}  // namespace mcs
