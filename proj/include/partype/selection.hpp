#pragma once

// Choosing which types get a parameter update at a step.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "partype/belief.hpp"
#include "partype/params.hpp"
#include "partype/rng.hpp"

namespace partype {

enum class SelectionPolicy { kAll, kPosterior, kUcb1 };

inline std::string_view to_string(SelectionPolicy p) {
  switch (p) {
    case SelectionPolicy::kAll: return "all";
    case SelectionPolicy::kPosterior: return "posterior";
    case SelectionPolicy::kUcb1: return "ucb1";
  }
  return "?";
}

inline SelectionPolicy parse_selection(std::string_view s) {
  if (s == "all") return SelectionPolicy::kAll;
  if (s == "posterior") return SelectionPolicy::kPosterior;
  if (s == "ucb1") return SelectionPolicy::kUcb1;
  throw std::invalid_argument("unknown selection policy: " + std::string(s));
}

inline std::vector<std::size_t> select_all(std::size_t type_space_size) {
  std::vector<std::size_t> out(type_space_size);
  for (std::size_t k = 0; k < type_space_size; ++k) out[k] = k;
  return out;
}

// Draws one index with probability belief[k].
inline std::size_t select_posterior(const TypeBelief& belief, Rng& rng) {
  if (belief.size() == 0) throw std::invalid_argument("empty belief");
  double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < belief.size(); ++k) {
    if (belief[k] <= 0.0) continue;
    acc += belief[k];
    last_positive = k;
    if (u < acc) return k;
  }
  return last_positive;
}

// Normalised L1 change between two estimates, in [0, 1].
inline double bandit_reward(const ParameterVector& p_new, const ParameterVector& p_old) {
  if (p_new.bounds() != p_old.bounds()) throw BoundsError("bandit reward needs identical bounds");
  double eta = 0.0;
  double change = 0.0;
  for (std::size_t k = 0; k < p_new.size(); ++k) {
    eta += p_new.bounds()[k].width();
    change += std::abs(p_new[k] - p_old[k]);
  }
  if (eta == 0.0) return 0.0;
  return std::min(1.0, change / eta);
}

struct BanditStats {
  std::vector<std::size_t> counts;
  std::vector<double> means;
  std::size_t total = 0;

  explicit BanditStats(std::size_t arms = 0) : counts(arms, 0), means(arms, 0.0) {}
  std::size_t arms() const { return counts.size(); }
};

// Classical UCB1. Unpulled arms first (lowest index), ties to the lowest index.
inline std::size_t select_ucb1(const BanditStats& stats) {
  if (stats.arms() == 0) throw std::invalid_argument("bandit without arms");
  for (std::size_t k = 0; k < stats.arms(); ++k)
    if (stats.counts[k] == 0) return k;
  const double log_total = std::log(static_cast<double>(stats.total));
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < stats.arms(); ++k) {
    double score = stats.means[k] + std::sqrt(2.0 * log_total / static_cast<double>(stats.counts[k]));
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

inline BanditStats record_reward(BanditStats stats, std::size_t index, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) throw std::out_of_range("bandit reward outside [0, 1]");
  if (index >= stats.arms()) throw std::out_of_range("bandit arm index");
  auto& n = stats.counts[index];
  ++n;
  stats.means[index] += (reward - stats.means[index]) / static_cast<double>(n);
  ++stats.total;
  return stats;
}

}  // namespace partype
