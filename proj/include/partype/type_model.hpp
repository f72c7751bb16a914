#pragma once

// Blackbox behaviour types ("hypothetical types") and history replay.
//
// A type maps an observation history to a distribution over the modelled
// agent's next action. Internal state is folded forward one observation at a
// time by step(). When parameter estimates change, the state is rebuilt by
// replaying the full history under the new parameters, so action
// probabilities never depend on parameter values used in the past.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "partype/action_distribution.hpp"
#include "partype/params.hpp"

namespace partype {

template <class Obs>
class TypeModel {
 public:
  virtual ~TypeModel() = default;

  virtual std::unique_ptr<TypeModel> clone() const = 0;
  virtual std::string name() const = 0;
  virtual const std::vector<Interval>& bounds() const = 0;
  // One flag per parameter; false means past values leak into the internal state.
  virtual std::vector<bool> markovian() const { return std::vector<bool>(bounds().size(), true); }
  virtual std::size_t num_actions() const = 0;

  // Returns to the freshly initialised internal state.
  virtual void reset() = 0;

  // Distribution over the modelled agent's action at obs, then folds obs into
  // the internal state.
  virtual ActionDistribution step(const Obs& obs, const ParameterVector& params) = 0;
};

// Value wrapper around a TypeModel: copies clone the model and its internal state.
template <class Obs>
class HypotheticalType {
 public:
  explicit HypotheticalType(std::unique_ptr<TypeModel<Obs>> model) : model_(std::move(model)) {
    if (!model_) throw std::invalid_argument("null type model");
    check_bounds(model_->bounds());
  }

  HypotheticalType(const HypotheticalType& other) : model_(other.model_->clone()), steps_(other.steps_) {}
  HypotheticalType& operator=(const HypotheticalType& other) {
    if (this != &other) {
      model_ = other.model_->clone();
      steps_ = other.steps_;
    }
    return *this;
  }
  HypotheticalType(HypotheticalType&&) noexcept = default;
  HypotheticalType& operator=(HypotheticalType&&) noexcept = default;

  std::string name() const { return model_->name(); }
  const std::vector<Interval>& bounds() const { return model_->bounds(); }
  std::vector<bool> markovian() const { return model_->markovian(); }
  bool is_markovian() const {
    for (bool m : model_->markovian())
      if (!m) return false;
    return true;
  }
  std::size_t num_actions() const { return model_->num_actions(); }
  // Number of observations folded into the internal state since the last reset.
  std::size_t steps_taken() const { return steps_; }

  const TypeModel<Obs>& model() const { return *model_; }

  void reset() {
    model_->reset();
    steps_ = 0;
  }

  ActionDistribution step(const Obs& obs, const ParameterVector& params) {
    check_params(params);
    auto dist = model_->step(obs, params);
    if (dist.size() != model_->num_actions())
      throw std::logic_error("type returned a distribution of the wrong size");
    ++steps_;
    return dist;
  }

  void check_params(const ParameterVector& params) const {
    if (params.bounds() != model_->bounds())
      throw BoundsError("parameter vector bounds do not match the type's bounds");
  }

 private:
  std::unique_ptr<TypeModel<Obs>> model_;
  std::size_t steps_ = 0;
};

// Rebuilds the internal state from scratch by stepping over the whole history.
template <class Obs>
HypotheticalType<Obs> replay_internal_state(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                                            const ParameterVector& params) {
  HypotheticalType<Obs> fresh = type;
  fresh.reset();
  for (const auto& obs : history) fresh.step(obs, params);
  return fresh;
}

// Distribution for the action taken at the last observation of `history`,
// with the internal state replayed over all earlier observations.
template <class Obs>
ActionDistribution action_probabilities(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                                        const ParameterVector& params) {
  if (history.empty()) throw std::invalid_argument("action_probabilities needs a non-empty history");
  auto replayed = replay_internal_state(type, history.first(history.size() - 1), params);
  return replayed.step(history.back(), params);
}

// Sum over the history of log P(actions[t] | history[0..t], params), each
// probability floored at 1e-12. One replay of the type.
template <class Obs>
double history_log_likelihood(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                              std::span<const std::size_t> actions, const ParameterVector& params) {
  if (history.size() != actions.size())
    throw std::invalid_argument("history and observed actions differ in length");
  HypotheticalType<Obs> fresh = type;
  fresh.reset();
  double total = 0.0;
  for (std::size_t t = 0; t < history.size(); ++t) {
    auto dist = fresh.step(history[t], params);
    total += std::log(std::max(dist[actions[t]], kMinActionProbability));
  }
  return total;
}

}  // namespace partype
