#pragma once

// JSON for worlds, instances and trajectories.
//
// Trajectory schema:
//   { "instance": <instance>, "steps": [ { "step": t, "actions": ["N", ...],
//     "order_seed": u64, "reward": r }, ... ] }

#include <nlohmann/json.hpp>

#include "partype/foraging/instance.hpp"

namespace partype::foraging {

using nlohmann::json;

inline json to_json(const ForagingState& s) {
  json agents = json::array(), items = json::array();
  for (const auto& a : s.agents)
    agents.push_back({{"x", a.pos.x}, {"y", a.pos.y}, {"level", a.level}, {"heading", int(a.heading)}});
  for (const auto& i : s.items)
    items.push_back({{"x", i.pos.x}, {"y", i.pos.y}, {"level", i.level}, {"collected", i.collected}});
  return {{"width", s.width}, {"height", s.height}, {"step", s.step}, {"agents", agents}, {"items", items}};
}

inline ForagingState world_from_json(const json& j) {
  ForagingState s;
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.step = j.value("step", 0);
  for (const auto& a : j.at("agents")) {
    int h = a.value("heading", 0);
    if (h < 0 || h > 3) throw std::invalid_argument("heading out of range");
    s.agents.push_back({{a.at("x").get<int>(), a.at("y").get<int>()}, a.at("level").get<double>(), static_cast<Heading>(h)});
  }
  for (const auto& i : j.at("items"))
    s.items.push_back({{i.at("x").get<int>(), i.at("y").get<int>()}, i.at("level").get<double>(), i.value("collected", false)});
  return s;
}

inline json to_json(const ForagingInstance& inst) {
  json truth = json::array();
  for (const auto& t : inst.truth) truth.push_back({{"type", to_string(t.kind)}, {"params", t.params.values()}});
  json est = json::array();
  for (const auto& per_agent : inst.initial_estimates) {
    json row = json::array();
    for (const auto& p : per_agent) row.push_back(p.values());
    est.push_back(row);
  }
  return {{"seed", inst.seed}, {"world", to_json(inst.world)}, {"truth", truth}, {"initial_estimates", est}};
}

inline ForagingInstance instance_from_json(const json& j) {
  ForagingInstance inst;
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.world = world_from_json(j.at("world"));
  for (const auto& t : j.at("truth"))
    inst.truth.push_back({parse_kind(t.at("type").get<std::string>()),
                          ParameterVector(t.at("params").get<std::vector<double>>(), foraging_bounds())});
  for (const auto& row : j.at("initial_estimates")) {
    std::vector<ParameterVector> per_agent;
    for (const auto& p : row) per_agent.emplace_back(p.get<std::vector<double>>(), foraging_bounds());
    inst.initial_estimates.push_back(std::move(per_agent));
  }
  return inst;
}

struct TrajectoryStep {
  int step = 0;
  std::vector<Action> actions;
  std::uint64_t order_seed = 0;
  int reward = 0;
};

struct Trajectory {
  ForagingInstance instance;
  std::vector<TrajectoryStep> steps;
};

inline json to_json(const Trajectory& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps) {
    json acts = json::array();
    for (Action a : s.actions) acts.push_back(std::string(to_string(a)));
    steps.push_back({{"step", s.step}, {"actions", acts}, {"order_seed", s.order_seed}, {"reward", s.reward}});
  }
  return {{"instance", to_json(tr.instance)}, {"steps", steps}};
}

inline Trajectory trajectory_from_json(const json& j) {
  Trajectory tr;
  tr.instance = instance_from_json(j.at("instance"));
  for (const auto& s : j.at("steps")) {
    TrajectoryStep st;
    st.step = s.at("step").get<int>();
    for (const auto& a : s.at("actions")) st.actions.push_back(parse_action(a.get<std::string>()));
    st.order_seed = s.at("order_seed").get<std::uint64_t>();
    st.reward = s.value("reward", 0);
    tr.steps.push_back(std::move(st));
  }
  return tr;
}

struct ReplayResult {
  ForagingState final_state;
  int total_reward = 0;
  bool consistent = true;  // recorded rewards match the re-simulation
};

// Re-simulates a trajectory from its instance.
inline ReplayResult replay_trajectory(const Trajectory& tr) {
  ReplayResult r;
  r.final_state = tr.instance.world;
  for (const auto& st : tr.steps) {
    auto out = step_world(r.final_state, st.actions, st.order_seed);
    r.final_state = std::move(out.state);
    r.total_reward += out.reward;
    if (out.reward != st.reward) r.consistent = false;
  }
  return r;
}

}  // namespace partype::foraging
