#pragma once

// Univariate polynomials in the monomial basis over a bounded domain, with
// least-squares fitting, exact products, derivatives and (absolute) integrals.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "partype/params.hpp"

namespace partype {

struct Sample {
  double x;
  double y;
};

class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  // coeffs[i] multiplies x^i.
  Polynomial(std::vector<double> coeffs, Interval domain) : coeffs_(std::move(coeffs)), domain_(domain) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  static Polynomial constant(double c, Interval domain) { return Polynomial({c}, domain); }

  // Storage degree; trailing zero coefficients count.
  std::size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const Interval& domain() const { return domain_; }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() == 1) return Polynomial({0.0}, domain_);
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d), domain_);
  }

  // Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a), domain_);
  }

  double integral(double a, double b) const {
    auto anti = antiderivative();
    return anti(b) - anti(a);
  }

  double integral() const { return integral(domain_.lo, domain_.hi); }

  // Real roots inside [a, b], ascending.
  std::vector<double> roots(double a, double b) const {
    std::vector<double> out;
    std::size_t eff = effective_degree();
    if (eff == 0) return out;
    if (eff == 1) {
      double r = -coeffs_[0] / coeffs_[1];
      if (r >= a && r <= b) out.push_back(r);
      return out;
    }
    // Roots of p are separated by roots of p'.
    std::vector<double> knots{a};
    for (double c : derivative().roots(a, b))
      if (c > knots.back()) knots.push_back(c);
    if (b > knots.back()) knots.push_back(b);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double lo = knots[i], hi = knots[i + 1];
      double flo = (*this)(lo), fhi = (*this)(hi);
      if (flo == 0.0) {
        if (out.empty() || out.back() != lo) out.push_back(lo);
        continue;
      }
      if (fhi == 0.0) continue;  // picked up as the next segment's left end
      if ((flo < 0.0) == (fhi < 0.0)) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = (*this)(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    if ((*this)(b) == 0.0 && (out.empty() || out.back() != b)) out.push_back(b);
    return out;
  }

  // ∫|p| over [a, b]: area below the axis counts positively.
  double abs_integral(double a, double b) const {
    auto anti = antiderivative();
    std::vector<double> knots{a};
    for (double r : roots(a, b))
      if (r > a && r < b) knots.push_back(r);
    knots.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) total += std::abs(anti(knots[i + 1]) - anti(knots[i]));
    return total;
  }

  double abs_integral() const { return abs_integral(domain_.lo, domain_.hi); }

  Polynomial scaled(double s) const {
    auto c = coeffs_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c), domain_);
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    std::vector<double> c(p.coeffs_.size() + q.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return Polynomial(std::move(c), p.domain_);
  }

 private:
  std::size_t effective_degree() const {
    std::size_t d = coeffs_.size() - 1;
    while (d > 0 && coeffs_[d] == 0.0) --d;
    return d;
  }

  std::vector<double> coeffs_;
  Interval domain_{};
};

// Least-squares fit of a polynomial of exactly `degree` (storage) to samples.
// Needs at least degree+1 distinct abscissae; with exactly that many the fit
// interpolates.
inline Polynomial fit_polynomial(std::span<const Sample> samples, std::size_t degree, Interval domain) {
  std::vector<double> xs;
  for (const auto& s : samples) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  std::size_t distinct = std::unique(xs.begin(), xs.end()) - xs.begin();
  if (distinct < degree + 1) throw std::invalid_argument("polynomial fit needs degree+1 distinct abscissae");

  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto m = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd vander(n, m);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double xp = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      vander(i, j) = xp;
      xp *= samples[i].x;
    }
    rhs(i) = samples[i].y;
  }
  Eigen::VectorXd c = vander.colPivHouseholderQr().solve(rhs);
  return Polynomial(std::vector<double>(c.data(), c.data() + c.size()), domain);
}

}  // namespace partype
