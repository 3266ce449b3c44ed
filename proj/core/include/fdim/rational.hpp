#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace freedim {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", "-p/q", an integer, or a finite decimal ("1.25") exactly.
/// Throws ParseError on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("3/2", "-1/4"); integers print without a denominator.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact conversion of a finite double.
Rational from_double(double x);

/// Largest double <= r and smallest double >= r.
double round_down(const Rational& r);
double round_up(const Rational& r);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(Integer(num), Integer(den));
}

}  // namespace freedim
