#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "partype/estimation.hpp"
#include "partype/foraging/instance.hpp"
#include "partype/selection.hpp"

namespace partype::harness {

// How the initial parameter estimates are set. `kCorrect` puts the true
// parameters into the true type's slot; every other slot is random.
enum class InitialEstimates { kRandom, kCorrect };

struct ExperimentConfig {
  std::string world = "10x10";
  Estimator estimator = Estimator::kAbu;
  SelectionPolicy selection = SelectionPolicy::kUcb1;
  InitialEstimates initial = InitialEstimates::kRandom;
  std::size_t ego_budget = 10;
  int rollouts = 0;   // 0: preset default
  int max_steps = 0;  // 0: preset default
  double exploration = 2.0;
  foraging::FollowerView follower_view = foraging::FollowerView::kOwn;
  std::size_t instances = 50;
  std::size_t first_instance = 0;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool write_traces = false;
  std::string output = "out";
  std::string label;

  foraging::WorldPreset preset() const {
    auto p = foraging::WorldPreset::named(world);
    if (rollouts > 0) p.rollouts = rollouts;
    if (max_steps > 0) p.max_steps = max_steps;
    return p;
  }

  std::string describe() const {
    if (!label.empty()) return label;
    if (estimator == Estimator::kNone) return initial == InitialEstimates::kCorrect ? "cor" : "rnd";
    std::string s(to_string(estimator));
    if (estimator == Estimator::kEgo) s += "-" + std::to_string(ego_budget);
    return s + "/" + std::string(to_string(selection));
  }
};

// Accepts the estimator names plus the baseline shorthands "rnd" and "cor".
inline void set_estimator(ExperimentConfig& cfg, const std::string& name) {
  if (name == "rnd") {
    cfg.estimator = Estimator::kNone;
    cfg.initial = InitialEstimates::kRandom;
  } else if (name == "cor") {
    cfg.estimator = Estimator::kNone;
    cfg.initial = InitialEstimates::kCorrect;
  } else {
    cfg.estimator = parse_estimator(name);
  }
}

inline std::string_view to_string(InitialEstimates i) { return i == InitialEstimates::kCorrect ? "correct" : "random"; }

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"world", c.world},
          {"estimator", to_string(c.estimator)},
          {"selection", to_string(c.selection)},
          {"initial_estimates", to_string(c.initial)},
          {"ego_budget", c.ego_budget},
          {"rollouts", c.preset().rollouts},
          {"max_steps", c.preset().max_steps},
          {"exploration", c.exploration},
          {"follower_view", c.follower_view == foraging::FollowerView::kOwn ? "own" : "omniscient"},
          {"instances", c.instances},
          {"first_instance", c.first_instance},
          {"seed", c.seed},
          {"output", c.output},
          {"label", c.describe()}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.world = j.value("world", c.world);
  if (j.contains("estimator")) set_estimator(c, j.at("estimator").get<std::string>());
  if (j.contains("selection")) c.selection = parse_selection(j.at("selection").get<std::string>());
  if (j.contains("initial_estimates")) {
    auto s = j.at("initial_estimates").get<std::string>();
    if (s == "random") c.initial = InitialEstimates::kRandom;
    else if (s == "correct") c.initial = InitialEstimates::kCorrect;
    else throw std::invalid_argument("unknown initial_estimates: " + s);
  }
  c.ego_budget = j.value("ego_budget", c.ego_budget);
  c.rollouts = j.value("rollouts", c.rollouts);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.exploration = j.value("exploration", c.exploration);
  if (j.contains("follower_view")) {
    auto s = j.at("follower_view").get<std::string>();
    if (s == "own") c.follower_view = foraging::FollowerView::kOwn;
    else if (s == "omniscient") c.follower_view = foraging::FollowerView::kOmniscient;
    else throw std::invalid_argument("unknown follower_view: " + s);
  }
  c.instances = j.value("instances", c.instances);
  c.first_instance = j.value("first_instance", c.first_instance);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  c.write_traces = j.value("write_traces", c.write_traces);
  c.output = j.value("output", c.output);
  c.label = j.value("label", c.label);
  if (c.ego_budget < 2) throw std::invalid_argument("ego_budget must be at least 2");
  if (c.instances < 1) throw std::invalid_argument("instances must be at least 1");
  (void)c.preset();
  return c;
}

}  // namespace partype::harness
