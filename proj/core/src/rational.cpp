#include "fdim/rational.hpp"

#include "fdim/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace freedim {

namespace {

Integer parse_digits(std::string_view digits, std::size_t column) {
  if (digits.empty()) throw ParseError("expected digits", column);
  Integer value = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[i];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(std::string("unexpected character '") + c + "' in number", column + i);
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    pos = 1;
  }
  const std::string_view body = text.substr(pos);
  Rational value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_digits(body.substr(0, slash), pos + 1);
    const Integer den = parse_digits(body.substr(slash + 1), pos + slash + 2);
    if (den == 0) throw ParseError("zero denominator", pos + slash + 2);
    value = Rational(num, den);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = body.substr(0, dot);
    const std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw ParseError("expected digits", pos + 1);
    const Integer w = whole.empty() ? Integer(0) : parse_digits(whole, pos + 1);
    const Integer f = frac.empty() ? Integer(0) : parse_digits(frac, pos + dot + 2);
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(parse_digits(body, pos + 1));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("cannot convert non-finite double to rational");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an exact integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational value{Integer(scaled)};
  if (exponent >= 0) {
    value *= Rational(Integer(1) << exponent);
  } else {
    value /= Rational(Integer(1) << -exponent);
  }
  return value;
}

double round_down(const Rational& r) {
  double d = to_double(r);
  while (from_double(d) > r) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

double round_up(const Rational& r) {
  double d = to_double(r);
  while (from_double(d) < r) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

}  // namespace freedim
