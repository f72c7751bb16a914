#pragma once

// Gaussian-process regression with a squared-exponential ARD kernel, and the
// expected-improvement acquisition used by the global estimator.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace partype {

struct GpSurrogate {
  std::vector<std::vector<double>> x;  // evaluated points
  std::vector<double> y;               // objective values
  std::vector<double> length_scales;   // one per input dimension
  double signal_variance = 1.0;
  double jitter = 1e-8;
  double prior_mean = 0.0;

  double kernel(std::span<const double> a, std::span<const double> b) const {
    double r2 = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
      double z = (a[d] - b[d]) / length_scales[d];
      r2 += z * z;
    }
    return signal_variance * std::exp(-0.5 * r2);
  }
};

struct GpPrediction {
  double mean;
  double variance;
};

// Factorises the kernel matrix once so many queries are cheap.
class FittedGp {
 public:
  explicit FittedGp(const GpSurrogate& s) : s_(&s) {
    const auto n = static_cast<Eigen::Index>(s.x.size());
    if (n == 0) throw std::invalid_argument("GP needs at least one evaluated point");
    if (s.y.size() != s.x.size()) throw std::invalid_argument("GP inputs and targets differ in length");
    for (const auto& p : s.x)
      if (p.size() != s.length_scales.size()) throw std::invalid_argument("GP input dimension mismatch");
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = s.kernel(s.x[i], s.x[j]);
    k.diagonal().array() += s.jitter;
    llt_.compute(k);
    if (llt_.info() != Eigen::Success) throw std::runtime_error("GP kernel matrix not positive definite");
    Eigen::VectorXd centred(n);
    for (Eigen::Index i = 0; i < n; ++i) centred(i) = s.y[i] - s.prior_mean;
    alpha_ = llt_.solve(centred);
  }

  GpPrediction operator()(std::span<const double> query) const {
    const auto n = static_cast<Eigen::Index>(s_->x.size());
    Eigen::VectorXd kq(n);
    for (Eigen::Index i = 0; i < n; ++i) kq(i) = s_->kernel(s_->x[i], query);
    double mean = s_->prior_mean + kq.dot(alpha_);
    Eigen::VectorXd v = llt_.matrixL().solve(kq);
    double var = s_->kernel(query, query) - v.squaredNorm();
    return {mean, std::max(var, 0.0)};
  }

 private:
  const GpSurrogate* s_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

inline GpPrediction gp_posterior(const GpSurrogate& surrogate, std::span<const double> query) {
  return FittedGp(surrogate)(query);
}

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// EI for maximisation: (mu - best) Phi(z) + sigma phi(z), z = (mu - best) / sigma.
inline double expected_improvement(double mean, double variance, double best_so_far) {
  double sigma = std::sqrt(std::max(variance, 0.0));
  if (sigma <= 0.0) return 0.0;
  double gap = mean - best_so_far;
  double z = gap / sigma;
  return std::max(0.0, gap * normal_cdf(z) + sigma * normal_pdf(z));
}

inline double expected_improvement(const GpSurrogate& surrogate, std::span<const double> query,
                                   double best_so_far) {
  auto p = gp_posterior(surrogate, query);
  return expected_improvement(p.mean, p.variance, best_so_far);
}

}  // namespace partype
