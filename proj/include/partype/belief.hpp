#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "partype/type_model.hpp"

namespace partype {

// Likelihoods are floored here as well as inside types, so a user-supplied
// type that emits exact zeros cannot collapse the posterior.
inline constexpr double kLikelihoodFloor = 1e-12;

// Posterior over a finite type space.
class TypeBelief {
 public:
  TypeBelief() = default;

  explicit TypeBelief(std::vector<double> probs) : probs_(std::move(probs)) {
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("belief entries must be nonnegative");
      sum += p;
    }
    if (!probs_.empty() && std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("belief entries must sum to 1");
  }

  static TypeBelief uniform(std::size_t n) {
    return TypeBelief(std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_.at(k); }
  const std::vector<double>& probs() const { return probs_; }

  std::size_t argmax() const {
    return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) - probs_.begin());
  }

 private:
  std::vector<double> probs_;
};

// posterior[k] ∝ max(likelihoods[k], 1e-12) · belief[k]
inline TypeBelief update_belief(const TypeBelief& belief, std::span<const double> likelihoods) {
  if (likelihoods.size() != belief.size())
    throw std::invalid_argument("likelihood vector does not match the type space");
  std::vector<double> post(belief.size());
  double z = 0.0;
  for (std::size_t k = 0; k < post.size(); ++k) {
    if (likelihoods[k] < 0.0 || std::isnan(likelihoods[k])) throw std::invalid_argument("negative likelihood");
    post[k] = std::max(likelihoods[k], kLikelihoodFloor) * belief[k];
    z += post[k];
  }
  if (!(z > 0.0)) throw std::logic_error("belief update produced zero total mass");
  for (double& p : post) p /= z;
  return TypeBelief(std::move(post));
}

// P(observed action | history, type, params); the last history element is the
// observation at which the action was taken.
template <class Obs>
double likelihood_of_observed(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                              const ParameterVector& params, std::size_t observed_action) {
  if (observed_action >= type.num_actions()) throw std::out_of_range("observed action not in action space");
  return action_probabilities(type, history, params)[observed_action];
}

}  // namespace partype
