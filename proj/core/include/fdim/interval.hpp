#pragma once

#include "fdim/rational.hpp"

#include <string>

namespace freedim {

/// Closed real interval [lo, hi]. Arithmetic rounds outward by one ulp per
/// operation, so results always enclose the exact value.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(const Rational& r);
  double width() const noexcept { return hi - lo; }
  double mid() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Rational& r) const;
  bool empty() const noexcept { return !(lo <= hi); }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
/// Multiplication by an exact rational scalar.
Interval scale(const Rational& s, const Interval& a);

/// Decimal rendering with 17 significant digits.
std::string format_decimal(double x);

}  // namespace freedim
