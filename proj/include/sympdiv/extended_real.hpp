#pragma once

#include <cmath>
#include <string>

#include "sympdiv/errors.hpp"

namespace sympdiv {

// A value in R ∪ {+∞}. The infinite state is a flag, never a floating-point
// infinity, so sums and comparisons never produce NaN.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: finite reals convert implicitly

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw DomainError("extended real is +inf");
    return value_;
  }

  // Finite value, or `fallback` when infinite.
  constexpr double value_or(double fallback) const {
    return infinite_ ? fallback : value_;
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend constexpr ExtendedReal operator-(ExtendedReal a, double b) {
    if (a.infinite_) return infinity();
    return ExtendedReal(a.value_ - b);
  }

  // a >= b with +inf >= everything.
  friend constexpr bool operator>=(ExtendedReal a, double b) {
    return a.infinite_ || a.value_ >= b;
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace sympdiv
