#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace partype {

class BoundsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Closed interval [lo, hi] with lo < hi.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return std::clamp(x, lo, hi); }
  // n evenly spaced points including both endpoints.
  std::vector<double> grid(std::size_t n) const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
      xs[i] = n == 1 ? lo : lo + width() * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) xs.back() = hi;
    return xs;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline void check_bounds(std::span<const Interval> bounds) {
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
      throw BoundsError("parameter bounds must be finite with lo < hi");
  }
}

// A point inside a bounded box. Construction enforces the bounds.
class ParameterVector {
 public:
  ParameterVector() = default;

  ParameterVector(std::vector<double> values, std::vector<Interval> bounds)
      : values_(std::move(values)), bounds_(std::move(bounds)) {
    if (values_.size() != bounds_.size())
      throw BoundsError("parameter vector and bounds differ in dimension");
    check_bounds(bounds_);
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!bounds_[k].contains(values_[k])) {
        std::ostringstream os;
        os << "parameter " << k << " = " << values_[k] << " outside [" << bounds_[k].lo << ", "
           << bounds_[k].hi << "]";
        throw BoundsError(os.str());
      }
    }
  }

  // Projects values onto the box instead of rejecting them.
  static ParameterVector clamped(std::vector<double> values, std::vector<Interval> bounds) {
    if (values.size() != bounds.size())
      throw BoundsError("parameter vector and bounds differ in dimension");
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = bounds[k].clamp(values[k]);
    return ParameterVector(std::move(values), std::move(bounds));
  }

  static ParameterVector midpoint(std::vector<Interval> bounds) {
    std::vector<double> v;
    for (const auto& b : bounds) v.push_back(0.5 * (b.lo + b.hi));
    return ParameterVector(std::move(v), std::move(bounds));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Interval>& bounds() const { return bounds_; }

  // Copy with coordinate k replaced; x must lie in bounds.
  ParameterVector with(std::size_t k, double x) const {
    auto v = values_;
    v.at(k) = x;
    return ParameterVector(std::move(v), bounds_);
  }

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  std::vector<double> values_;
  std::vector<Interval> bounds_;
};

}  // namespace partype
