#pragma once

// Parameter estimators for a single type:
//  - approximate gradient ascent on a fitted likelihood profile,
//  - approximate Bayesian updating of polynomial parameter densities,
//  - global optimisation of the history likelihood with GP/expected improvement.
//
// The polynomial estimators treat each parameter separately: coordinate k is
// profiled with the other coordinates pinned at the previous estimate, and all
// coordinates are then updated together.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "partype/gp.hpp"
#include "partype/params.hpp"
#include "partype/polynomial.hpp"
#include "partype/rng.hpp"
#include "partype/type_model.hpp"

namespace partype {

inline constexpr std::size_t kFitDegree = 4;
inline constexpr std::size_t kProfilePoints = 5;

enum class Estimator { kNone, kAga, kAbu, kEgo };

inline std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::kNone: return "none";
    case Estimator::kAga: return "aga";
    case Estimator::kAbu: return "abu";
    case Estimator::kEgo: return "ego";
  }
  return "?";
}

inline Estimator parse_estimator(std::string_view s) {
  if (s == "none") return Estimator::kNone;
  if (s == "aga") return Estimator::kAga;
  if (s == "abu") return Estimator::kAbu;
  if (s == "ego") return Estimator::kEgo;
  throw std::invalid_argument("unknown estimator: " + std::string(s));
}

// Likelihood of the most recent observed action as a function of the parameters.
using LikelihoodFn = std::function<double(const ParameterVector&)>;
// Objective over the whole history (log-likelihood sum).
using ObjectiveFn = std::function<double(const ParameterVector&)>;

// ---------------------------------------------------------------------------
// Likelihood profiles

inline std::vector<Sample> sample_profile(const LikelihoodFn& f, const ParameterVector& pinned, std::size_t k) {
  if (k >= pinned.size()) throw std::out_of_range("profile parameter index");
  std::vector<Sample> out;
  out.reserve(kProfilePoints);
  for (double x : pinned.bounds()[k].grid(kProfilePoints)) out.push_back({x, f(pinned.with(k, x))});
  return out;
}

template <class Obs>
LikelihoodFn observed_action_likelihood(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                                        std::size_t observed_action) {
  return [&type, history, observed_action](const ParameterVector& p) {
    return action_probabilities(type, history, p)[observed_action];
  };
}

// Five uniformly spaced (x, f(x)) pairs for parameter k, others pinned.
// `history` ends with the observation at which `observed_action` was taken.
template <class Obs>
std::vector<Sample> sample_likelihood_profile(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                                              std::size_t observed_action, const ParameterVector& pinned,
                                              std::size_t k) {
  return sample_profile(observed_action_likelihood(type, history, observed_action), pinned, k);
}

// ---------------------------------------------------------------------------
// Approximate gradient ascent

struct LineSearchOptions {
  double contraction = 0.5;
  double sufficient_increase = 0.5;
  double initial_step = 1.0;
  int max_halvings = 20;
};

// Projected backtracking (Armijo) ascent step on a univariate polynomial.
inline double line_search_ascent(const Polynomial& fhat, double x0, const Interval& bounds,
                                 const LineSearchOptions& opts = {}) {
  const double g = fhat.derivative()(x0);
  if (g == 0.0 || !std::isfinite(g)) return x0;
  const double f0 = fhat(x0);
  double step = opts.initial_step;
  for (int i = 0; i <= opts.max_halvings; ++i) {
    double x = bounds.clamp(x0 + step * g);
    if (fhat(x) >= f0 + opts.sufficient_increase * g * (x - x0)) return x;
    step *= opts.contraction;
  }
  return x0;
}

inline ParameterVector aga_step(const LikelihoodFn& f, const ParameterVector& prev, const LineSearchOptions& opts = {}) {
  std::vector<double> next(prev.size());
  for (std::size_t k = 0; k < prev.size(); ++k) {
    const auto& b = prev.bounds()[k];
    auto fhat = fit_polynomial(sample_profile(f, prev, k), kFitDegree, b);
    next[k] = line_search_ascent(fhat, prev[k], b, opts);
  }
  return ParameterVector::clamped(std::move(next), prev.bounds());
}

template <class Obs>
ParameterVector aga_update(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                           std::size_t observed_action, const ParameterVector& p_prev,
                           const LineSearchOptions& opts = {}) {
  return aga_step(observed_action_likelihood(type, history, observed_action), p_prev, opts);
}

// ---------------------------------------------------------------------------
// Approximate Bayesian updating

// One polynomial density per parameter, each absolutely integrating to 1.
struct ParameterPosterior {
  std::vector<Polynomial> marginals;

  static ParameterPosterior uniform(std::span<const Interval> bounds) {
    ParameterPosterior post;
    for (const auto& b : bounds) {
      std::vector<double> c(kFitDegree + 1, 0.0);
      c[0] = 1.0 / b.width();
      post.marginals.emplace_back(std::move(c), b);
    }
    return post;
  }
};

// Inverse-CDF sampler for the density proportional to |p| on its domain,
// built from a trapezoidal cumulative table.
class AbsDensitySampler {
 public:
  AbsDensitySampler(const Polynomial& p, std::size_t table_size = 512)
      : xs_(p.domain().grid(table_size)), cdf_(table_size, 0.0) {
    std::vector<double> dens(table_size);
    for (std::size_t i = 0; i < table_size; ++i) dens[i] = std::abs(p(xs_[i]));
    for (std::size_t i = 1; i < table_size; ++i)
      cdf_[i] = cdf_[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * (xs_[i] - xs_[i - 1]);
  }

  double operator()(Rng& rng) const {
    const double u = uniform01(rng);
    const double total = cdf_.back();
    if (!(total > 0.0)) return xs_.front() + u * (xs_.back() - xs_.front());
    const double target = u * total;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    if (i + 1 >= cdf_.size()) return xs_.back();
    const double seg = cdf_[i + 1] - cdf_[i];
    const double frac = seg > 0.0 ? (target - cdf_[i]) / seg : 0.0;
    return xs_[i] + frac * (xs_[i + 1] - xs_[i]);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> cdf_;
};

struct AbuOptions {
  std::size_t estimate_samples = 10;
  std::size_t cdf_table = 512;
  double sample_floor = 1e-6;
};

struct AbuResult {
  ParameterPosterior posterior;
  ParameterVector estimate;
};

// Posterior update of one marginal: product with the fitted likelihood,
// resample on the grid (floored), refit, normalise by the absolute integral.
inline Polynomial abu_marginal_update(const Polynomial& prior, const Polynomial& fhat, double sample_floor = 1e-6) {
  const Interval& b = prior.domain();
  const Polynomial g = fhat * prior;
  std::vector<Sample> pts;
  for (double x : b.grid(kProfilePoints)) pts.push_back({x, std::max(g(x), sample_floor)});
  Polynomial h = fit_polynomial(pts, kFitDegree, b);
  const double mass = h.abs_integral();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::runtime_error("parameter posterior has no mass");
  return h.scaled(1.0 / mass);
}

inline AbuResult abu_step(const ParameterPosterior& posterior, const LikelihoodFn& f, const ParameterVector& prev,
                          Rng& rng, const AbuOptions& opts = {}) {
  if (posterior.marginals.size() != prev.size()) throw std::invalid_argument("posterior dimension mismatch");
  AbuResult out;
  std::vector<double> est(prev.size());
  for (std::size_t k = 0; k < prev.size(); ++k) {
    const auto& b = prev.bounds()[k];
    auto fhat = fit_polynomial(sample_profile(f, prev, k), kFitDegree, b);
    out.posterior.marginals.push_back(abu_marginal_update(posterior.marginals[k], fhat, opts.sample_floor));
    AbsDensitySampler sampler(out.posterior.marginals.back(), opts.cdf_table);
    double acc = 0.0;
    for (std::size_t s = 0; s < opts.estimate_samples; ++s) acc += sampler(rng);
    est[k] = acc / static_cast<double>(opts.estimate_samples);
  }
  out.estimate = ParameterVector::clamped(std::move(est), prev.bounds());
  return out;
}

template <class Obs>
AbuResult abu_update(const ParameterPosterior& posterior, const HypotheticalType<Obs>& type,
                     std::span<const Obs> history, std::size_t observed_action, const ParameterVector& p_prev,
                     Rng& rng, const AbuOptions& opts = {}) {
  return abu_step(posterior, observed_action_likelihood(type, history, observed_action), p_prev, rng, opts);
}

// ---------------------------------------------------------------------------
// Global optimisation with a GP surrogate

struct EgoOptions {
  std::size_t budget = 10;
  std::size_t random_candidates = 1000;
  double length_scale_fraction = 0.3;
  double jitter = 1e-8;
  // When non-empty, initial points and acquisition candidates come from this
  // fixed set (raw coordinates) instead of quasi-random / uniform draws.
  std::vector<std::vector<double>> candidate_set;
};

struct EgoResult {
  ParameterVector best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<ParameterVector> evaluated;
  std::vector<double> values;
};

namespace detail {

inline double radical_inverse(std::size_t index, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline constexpr std::array<std::size_t, 12> kHaltonBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace detail

// Randomly shifted Halton points in the unit cube.
inline std::vector<std::vector<double>> halton_design(std::size_t count, std::size_t dim, Rng& rng) {
  if (dim > detail::kHaltonBases.size()) throw std::invalid_argument("too many dimensions for Halton design");
  std::vector<double> shift(dim);
  for (auto& s : shift) s = uniform01(rng);
  std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t d = 0; d < dim; ++d) {
      double v = detail::radical_inverse(i + 1, detail::kHaltonBases[d]) + shift[d];
      pts[i][d] = v - std::floor(v);
    }
  return pts;
}

inline EgoResult ego_maximize(const ObjectiveFn& objective, const std::vector<Interval>& bounds, Rng& rng,
                              const EgoOptions& opts = {}) {
  if (opts.budget < 2) throw std::invalid_argument("EGO budget must be at least 2");
  check_bounds(bounds);
  const std::size_t dim = bounds.size();
  const bool fixed = !opts.candidate_set.empty();

  auto to_unit = [&](const std::vector<double>& raw) {
    std::vector<double> u(dim);
    for (std::size_t d = 0; d < dim; ++d) u[d] = (raw[d] - bounds[d].lo) / bounds[d].width();
    return u;
  };
  auto to_params = [&](const std::vector<double>& unit) {
    std::vector<double> v(dim);
    for (std::size_t d = 0; d < dim; ++d) v[d] = bounds[d].lo + std::clamp(unit[d], 0.0, 1.0) * bounds[d].width();
    return ParameterVector::clamped(std::move(v), bounds);
  };

  std::vector<std::vector<double>> fixed_unit;
  std::vector<bool> used;
  if (fixed) {
    for (const auto& c : opts.candidate_set) {
      if (c.size() != dim) throw std::invalid_argument("candidate dimension mismatch");
      fixed_unit.push_back(to_unit(c));
    }
    used.assign(fixed_unit.size(), false);
  }

  EgoResult res;
  GpSurrogate gp;
  gp.length_scales.assign(dim, opts.length_scale_fraction);
  gp.jitter = opts.jitter;

  auto evaluate = [&](const std::vector<double>& unit) {
    auto p = to_params(unit);
    double v = objective(p);
    gp.x.push_back(to_unit(p.values()));
    res.evaluated.push_back(p);
    res.values.push_back(v);
    if (v > res.best_value || res.evaluated.size() == 1) {
      res.best_value = v;
      res.best = p;
    }
  };

  const std::size_t n_init = std::min(opts.budget, std::max<std::size_t>(2, opts.budget / 2));
  if (fixed) {
    std::vector<std::size_t> order(fixed_unit.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n_init && i < order.size(); ++i) {
      used[order[i]] = true;
      evaluate(fixed_unit[order[i]]);
    }
  } else {
    for (const auto& u : halton_design(n_init, dim, rng)) evaluate(u);
  }

  while (res.evaluated.size() < opts.budget) {
    // Standardise targets; the GP has zero prior mean and unit signal variance.
    const double n = static_cast<double>(res.values.size());
    const double mean = std::accumulate(res.values.begin(), res.values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : res.values) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / n);
    if (!(sd > 0.0)) sd = 1.0;
    gp.y.clear();
    for (double v : res.values) gp.y.push_back((v - mean) / sd);
    const double best = *std::max_element(gp.y.begin(), gp.y.end());
    FittedGp model(gp);

    std::vector<double> pick;
    double pick_ei = -1.0;
    std::size_t pick_index = 0;
    if (fixed) {
      bool any = false;
      for (std::size_t i = 0; i < fixed_unit.size(); ++i) {
        if (used[i]) continue;
        auto pr = model(fixed_unit[i]);
        double ei = expected_improvement(pr.mean, pr.variance, best);
        if (ei > pick_ei) {
          pick_ei = ei;
          pick_index = i;
          any = true;
        }
      }
      if (!any) break;
      used[pick_index] = true;
      pick = fixed_unit[pick_index];
    } else {
      std::vector<double> cand(dim);
      for (std::size_t c = 0; c < opts.random_candidates; ++c) {
        for (auto& v : cand) v = uniform01(rng);
        auto pr = model(cand);
        double ei = expected_improvement(pr.mean, pr.variance, best);
        if (ei > pick_ei) {
          pick_ei = ei;
          pick = cand;
        }
      }
    }
    evaluate(pick);
  }
  return res;
}

// Maximises sum_t log P(actions[t] | history[0..t], p) over the parameter box.
template <class Obs>
ParameterVector ego_update(const HypotheticalType<Obs>& type, std::span<const Obs> history,
                           std::span<const std::size_t> observed_actions, Rng& rng, const EgoOptions& opts = {}) {
  auto objective = [&](const ParameterVector& p) { return history_log_likelihood(type, history, observed_actions, p); };
  return ego_maximize(objective, type.bounds(), rng, opts).best;
}

}  // namespace partype
