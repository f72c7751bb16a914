#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace partype {

// Smallest probability any action may receive.
inline constexpr double kMinActionProbability = 1e-12;

// Dense distribution over an enumerated action space; action ids are indices.
class ActionDistribution {
 public:
  ActionDistribution() = default;

  explicit ActionDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("empty action space");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= kMinActionProbability) || p > 1.0 + 1e-9)
        throw std::invalid_argument("action probability outside [1e-12, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("action probabilities do not sum to 1");
  }

  static ActionDistribution uniform(std::size_t n) {
    return ActionDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  // Adds `mass` to every entry of an unnormalised weight vector and normalises.
  static ActionDistribution mixed(std::vector<double> weights, double mass) {
    double sum = 0.0;
    for (double& w : weights) {
      w += mass;
      sum += w;
    }
    for (double& w : weights) w /= sum;
    return ActionDistribution(std::move(weights));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_.at(a); }
  const std::vector<double>& probs() const { return probs_; }

  friend bool operator==(const ActionDistribution&, const ActionDistribution&) = default;

 private:
  std::vector<double> probs_;
};

}  // namespace partype
