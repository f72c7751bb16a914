#pragma once

// One foraging episode: selective parameter estimation and belief updates for
// every other agent, followed by a UCT planning step for the controlled agent.

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "partype/belief.hpp"
#include "partype/estimation.hpp"
#include "partype/foraging/instance.hpp"
#include "partype/foraging/serialization.hpp"
#include "partype/foraging/types.hpp"
#include "partype/harness/config.hpp"
#include "partype/planner/uct.hpp"
#include "partype/selection.hpp"

namespace partype::harness {

using foraging::ForagingObservation;
using Type = HypotheticalType<ForagingObservation>;

// Random-stream tags for derive_seed.
enum Stream : std::uint64_t {
  kStreamPlanner = 1,
  kStreamTrueAgent = 2,
  kStreamWorld = 3,
  kStreamSelection = 4,
  kStreamEstimator = 5,
};

struct StepRecord {
  int step = 0;
  std::size_t agent = 0;  // world index of the other agent
  std::vector<double> belief;
  double belief_true_type = 0.0;
  std::array<double, 3> error{};  // |true - estimate| for the true type
  std::vector<std::size_t> selected;
  double update_seconds = 0.0;  // mean over this step's updates
  std::size_t updates = 0;
};

struct EpisodeRecord {
  std::size_t instance = 0;
  bool completed = false;
  int steps = 0;
  std::vector<StepRecord> per_step;
  double update_seconds_total = 0.0;
  std::size_t updates_total = 0;
  foraging::Trajectory trajectory;
};

// Per other agent bookkeeping for the estimation loop.
struct AgentModelState {
  std::size_t agent = 1;
  TypeBelief belief;
  std::vector<Type> types;            // internal state covers observations before the newest one
  std::vector<ParameterVector> estimates;
  std::vector<ParameterPosterior> posteriors;
  BanditStats bandit;
  std::vector<std::size_t> observed;  // this agent's actions so far
};

class EpisodeRunner {
 public:
  EpisodeRunner(const foraging::ForagingInstance& inst, const ExperimentConfig& cfg)
      : inst_(inst), cfg_(cfg), preset_(cfg.preset()) {
    planner::UctConfig ucfg;
    ucfg.rollouts = preset_.rollouts;
    ucfg.exploration = cfg.exploration;
    planner_ = planner::UctPlanner(ucfg, cfg.follower_view);

    for (std::size_t j = 1; j < inst.world.agents.size(); ++j) {
      AgentModelState m;
      m.agent = j;
      m.belief = TypeBelief::uniform(foraging::kAllKinds.size());
      m.bandit = BanditStats(foraging::kAllKinds.size());
      for (std::size_t k = 0; k < foraging::kAllKinds.size(); ++k) {
        m.types.push_back(foraging::make_foraging_type(foraging::kAllKinds[k], j, cfg.follower_view));
        auto est = inst.initial_estimates.at(j - 1).at(k);
        if (cfg.initial == InitialEstimates::kCorrect && foraging::kAllKinds[k] == inst.truth.at(j - 1).kind)
          est = inst.truth.at(j - 1).params;
        m.estimates.push_back(est);
        m.posteriors.push_back(ParameterPosterior::uniform(foraging::foraging_bounds()));
      }
      models_.push_back(std::move(m));
      true_states_.emplace_back();
    }
  }

  EpisodeRecord run() {
    EpisodeRecord rec;
    rec.trajectory.instance = inst_;
    history_.push_back({inst_.world, {}});
    const std::uint64_t seed = inst_.seed;

    for (int t = 0;; ++t) {
      const auto& world = history_.back().world;
      for (auto& m : models_) rec.per_step.push_back(observe(m, t, rec));

      if (world.all_collected() || t >= preset_.max_steps) {
        rec.completed = world.all_collected();
        rec.steps = t;
        break;
      }

      std::vector<planner::AgentHypotheses> hyps;
      for (const auto& m : models_) {
        planner::AgentHypotheses h;
        h.agent = m.agent;
        h.belief = m.belief.probs();
        for (std::size_t k = 0; k < m.types.size(); ++k) {
          h.params.push_back(foraging::ForagingTypeParams::from(m.estimates[k]));
          h.states.push_back(foraging::foraging_state_of(m.types[k]));
        }
        hyps.push_back(std::move(h));
      }
      std::vector<foraging::Action> joint(world.agents.size());
      joint[0] = planner_.plan(world, hyps, derive_seed(seed, {kStreamPlanner, std::uint64_t(t)}));

      for (std::size_t j = 1; j < world.agents.size(); ++j) {
        const auto& truth = inst_.truth[j - 1];
        auto probs = foraging::foraging_policy(truth.kind, true_states_[j - 1],
                                               foraging::ForagingTypeParams::from(truth.params), world, j,
                                               cfg_.follower_view);
        Rng rng = make_rng(seed, {kStreamTrueAgent, j, std::uint64_t(t)});
        std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
        joint[j] = foraging::action_from_index(pick(rng));
      }

      const std::uint64_t order_seed = derive_seed(seed, {kStreamWorld, std::uint64_t(t)});
      auto out = foraging::step_world(world, joint, order_seed);
      rec.trajectory.steps.push_back({t, joint, order_seed, out.reward});
      planner_.advance(joint[0], out.state);
      history_.push_back({std::move(out.state), joint});
    }
    return rec;
  }

  const std::vector<AgentModelState>& models() const { return models_; }

 private:
  // Processes the newest observation for one other agent: parameter updates
  // for the selected types, internal-state replay, and the belief update.
  StepRecord observe(AgentModelState& m, int t, EpisodeRecord& rec) {
    StepRecord sr;
    sr.step = t;
    sr.agent = m.agent;
    if (t > 0) {
      const auto T = static_cast<std::size_t>(t);
      const std::size_t a = foraging::index_of(history_[T].previous_actions.at(m.agent));
      m.observed.push_back(a);
      // Observations 0..t-1; the last one is where `a` was taken.
      std::span<const ForagingObservation> upto(history_.data(), T);

      if (cfg_.estimator != Estimator::kNone) {
        sr.selected = select(m, t);
        for (std::size_t k : sr.selected) {
          auto start = std::chrono::steady_clock::now();
          ParameterVector fresh = estimate(m, k, upto, a, t);
          double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          sr.update_seconds += secs;
          ++sr.updates;
          if (cfg_.selection == SelectionPolicy::kUcb1)
            m.bandit = record_reward(std::move(m.bandit), k, bandit_reward(fresh, m.estimates[k]));
          if (fresh != m.estimates[k]) {
            m.estimates[k] = std::move(fresh);
            m.types[k] = replay_internal_state(m.types[k], upto.first(T - 1), m.estimates[k]);
          }
        }
        rec.update_seconds_total += sr.update_seconds;
        rec.updates_total += sr.updates;
        if (sr.updates > 0) sr.update_seconds /= static_cast<double>(sr.updates);
      }

      std::vector<double> lik(m.types.size());
      for (std::size_t k = 0; k < m.types.size(); ++k) lik[k] = m.types[k].step(upto.back(), m.estimates[k])[a];
      m.belief = update_belief(m.belief, lik);
    }

    const auto& truth = inst_.truth.at(m.agent - 1);
    const auto tk = static_cast<std::size_t>(truth.kind);
    sr.belief = m.belief.probs();
    sr.belief_true_type = m.belief[tk];
    for (std::size_t p = 0; p < 3; ++p) sr.error[p] = std::abs(truth.params[p] - m.estimates[tk][p]);
    return sr;
  }

  std::vector<std::size_t> select(AgentModelState& m, int t) const {
    switch (cfg_.selection) {
      case SelectionPolicy::kAll: return select_all(m.types.size());
      case SelectionPolicy::kPosterior: {
        Rng rng = make_rng(inst_.seed, {kStreamSelection, m.agent, std::uint64_t(t)});
        return {select_posterior(m.belief, rng)};
      }
      case SelectionPolicy::kUcb1: return {select_ucb1(m.bandit)};
    }
    return {};
  }

  ParameterVector estimate(AgentModelState& m, std::size_t k, std::span<const ForagingObservation> upto,
                           std::size_t action, int t) {
    Rng rng = make_rng(inst_.seed, {kStreamEstimator, m.agent, k, std::uint64_t(t)});
    switch (cfg_.estimator) {
      case Estimator::kAga: return aga_update(m.types[k], upto, action, m.estimates[k]);
      case Estimator::kAbu: {
        auto res = abu_update(m.posteriors[k], m.types[k], upto, action, m.estimates[k], rng);
        m.posteriors[k] = std::move(res.posterior);
        return res.estimate;
      }
      case Estimator::kEgo: {
        EgoOptions opts;
        opts.budget = cfg_.ego_budget;
        return ego_update(m.types[k], upto, std::span<const std::size_t>(m.observed), rng, opts);
      }
      case Estimator::kNone: break;
    }
    return m.estimates[k];
  }

  foraging::ForagingInstance inst_;
  ExperimentConfig cfg_;
  foraging::WorldPreset preset_;
  planner::UctPlanner planner_;
  std::vector<AgentModelState> models_;
  std::vector<foraging::ForagingTypeState> true_states_;
  std::vector<ForagingObservation> history_;
};

inline EpisodeRecord run_episode(const foraging::ForagingInstance& inst, const ExperimentConfig& cfg) {
  return EpisodeRunner(inst, cfg).run();
}

enum class BaselineKind { kRnd, kCor };

// Fixed parameters, no updates: random everywhere (rnd) or correct for the
// true type (cor).
inline EpisodeRecord run_baseline(const foraging::ForagingInstance& inst, ExperimentConfig cfg, BaselineKind kind) {
  cfg.estimator = Estimator::kNone;
  cfg.initial = kind == BaselineKind::kCor ? InitialEstimates::kCorrect : InitialEstimates::kRandom;
  return run_episode(inst, cfg);
}

}  // namespace partype::harness
