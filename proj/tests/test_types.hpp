#pragma once

// Synthetic blackbox types for estimator tests. Observations are bare step
// counters; the action distribution is a known function of the parameters.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <span>

#include "partype/rng.hpp"
#include "partype/type_model.hpp"

namespace partype::testing {

struct Tick {
  int t = 0;
};

// Two actions; P(action 0) = prob(params), clamped into [1e-9, 1 - 1e-9].
class FunctionType final : public TypeModel<Tick> {
 public:
  using Fn = std::function<double(const ParameterVector&)>;

  FunctionType(std::vector<Interval> bounds, Fn prob) : bounds_(std::move(bounds)), prob_(std::move(prob)) {}

  std::unique_ptr<TypeModel<Tick>> clone() const override { return std::make_unique<FunctionType>(*this); }
  std::string name() const override { return "function"; }
  const std::vector<Interval>& bounds() const override { return bounds_; }
  std::size_t num_actions() const override { return 2; }
  void reset() override {}
  ActionDistribution step(const Tick&, const ParameterVector& p) override {
    double q = std::clamp(prob_(p), 1e-9, 1.0 - 1e-9);
    return ActionDistribution({q, 1.0 - q});
  }

 private:
  std::vector<Interval> bounds_;
  Fn prob_;
};

// One action only.
class SingleActionType final : public TypeModel<Tick> {
 public:
  std::unique_ptr<TypeModel<Tick>> clone() const override { return std::make_unique<SingleActionType>(*this); }
  std::string name() const override { return "single"; }
  const std::vector<Interval>& bounds() const override {
    static const std::vector<Interval> b{{0.0, 1.0}};
    return b;
  }
  std::size_t num_actions() const override { return 1; }
  void reset() override {}
  ActionDistribution step(const Tick&, const ParameterVector&) override { return ActionDistribution({1.0}); }
};

// Non-Markovian: an exponential moving average of observed ticks with rate p,
// compared to a threshold. Past rates are baked into the average.
class AveragingType final : public TypeModel<Tick> {
 public:
  std::unique_ptr<TypeModel<Tick>> clone() const override { return std::make_unique<AveragingType>(*this); }
  std::string name() const override { return "averaging"; }
  const std::vector<Interval>& bounds() const override {
    static const std::vector<Interval> b{{0.05, 0.95}};
    return b;
  }
  std::vector<bool> markovian() const override { return {false}; }
  std::size_t num_actions() const override { return 2; }
  void reset() override { avg_ = 0.0; }
  ActionDistribution step(const Tick& obs, const ParameterVector& p) override {
    avg_ = (1.0 - p[0]) * avg_ + p[0] * (obs.t % 3);
    double q = 0.1 + 0.8 * std::clamp(avg_ / 2.0, 0.0, 1.0);
    return ActionDistribution({q, 1.0 - q});
  }
  double average() const { return avg_; }

 private:
  double avg_ = 0.0;
};

inline HypotheticalType<Tick> function_type(std::vector<Interval> bounds, FunctionType::Fn fn) {
  return HypotheticalType<Tick>(std::make_unique<FunctionType>(std::move(bounds), std::move(fn)));
}

template <class T>
std::span<const T> cview(const std::vector<T>& v) {
  return std::span<const T>(v);
}

inline std::vector<Tick> ticks(int n) {
  std::vector<Tick> h;
  for (int i = 0; i < n; ++i) h.push_back({i});
  return h;
}

}  // namespace partype::testing
