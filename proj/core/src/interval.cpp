#include "fdim/interval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace freedim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x) { return std::nextafter(x, -kInf); }
double up(double x) { return std::nextafter(x, kInf); }

}  // namespace

Interval Interval::point(const Rational& r) { return {round_down(r), round_up(r)}; }

bool Interval::contains(const Rational& r) const {
  return from_double(lo) <= r && r <= from_double(hi);
}

Interval operator+(const Interval& a, const Interval& b) {
  return {down(a.lo + b.lo), up(a.hi + b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {down(a.lo - b.hi), up(a.hi - b.lo)};
}

Interval scale(const Rational& s, const Interval& a) {
  const Interval sc = Interval::point(s);
  const double c[4] = {sc.lo * a.lo, sc.lo * a.hi, sc.hi * a.lo, sc.hi * a.hi};
  double lo = c[0];
  double hi = c[0];
  for (double v : c) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {down(lo), up(hi)};
}

std::string format_decimal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace freedim
