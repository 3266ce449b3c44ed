#include "fdim/construct.hpp"

#include "fdim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace freedim {

namespace {

constexpr std::uint64_t kMaxK = std::uint64_t{1} << 62;
constexpr std::uint64_t kExactScan = 10000;

/// log prod_{m > after} (1 - c 2^-m)^2
double log_tail(double c, std::size_t after) {
  double sum = 0.0;
  for (std::size_t m = after + 1; m <= after + 80; ++m) sum += 2.0 * std::log1p(-c * std::ldexp(1.0, -static_cast<int>(m)));
  return sum;
}

/// Rate c in (0, 2) with prod_{m >= 1} (1 - c 2^-m)^2 = target.
double solve_rate(double target) {
  const double goal = std::log(target);
  double lo = 0.0;
  double hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_tail(mid, 0) > goal) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Rational defect(std::uint64_t l, std::uint64_t k) {
  const Rational x = Rational(Integer(k - l), Integer(k));
  return x * x + Rational(Integer(1), Integer(k) * Integer(k));
}

std::optional<Integer> exact_sqrt(const Integer& x) {
  if (x < 0) return std::nullopt;
  const Integer r = boost::multiprecision::sqrt(x);
  if (r * r == x) return r;
  return std::nullopt;
}

/// Produces the terms (l(n), k(n)) one at a time.
class BsGenerator {
 public:
  BsGenerator(Rational target, double gamma, double rate)
      : remaining_(std::move(target)), gamma_(gamma), gamma_exact_(from_double(gamma)), rate_(rate) {}

  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& terms() const { return terms_; }

  std::optional<FdAlgebra> factor(std::size_t n) {
    while (terms_.size() < n && !done_) next();
    if (n <= terms_.size()) {
      const auto [l, k] = terms_[n - 1];
      return FdAlgebra::corner_pair(static_cast<std::int64_t>(l), static_cast<std::int64_t>(k));
    }
    return std::nullopt;
  }

 private:
  Rational schedule_bound(std::size_t n) const { return gamma_exact_ / Rational(Integer(1) << n); }

  bool admissible(std::uint64_t l, std::uint64_t k, std::size_t n) const {
    return l >= 1 && l < k && Rational(Integer(l), Integer(k)) < schedule_bound(n);
  }

  void accept(std::uint64_t l, std::uint64_t k) {
    terms_.emplace_back(l, k);
    remaining_ /= defect(l, k);
    if (remaining_ == 1) done_ = true;
  }

  bool try_exact(std::size_t n) {
    const Integer p = numerator(remaining_);
    const Integer q = denominator(remaining_);
    if (q > Integer(kExactScan) * Integer(kExactScan)) return false;
    for (std::uint64_t k = 2; k <= kExactScan; ++k) {
      const Integer k2 = Integer(k) * Integer(k);
      if ((p * k2) % q != 0) continue;
      const auto j = exact_sqrt(p * k2 / q - 1);
      if (!j || *j >= Integer(k)) continue;
      const std::uint64_t l = k - j->convert_to<std::uint64_t>();
      if (!admissible(l, k, n)) continue;
      accept(l, k);
      return true;
    }
    return false;
  }

  void next() {
    const std::size_t n = terms_.size() + 1;
    if (try_exact(n)) return;
    const double r = to_double(remaining_);
    double target = r / std::exp(log_tail(rate_, n));
    if (!(target < 1.0)) target = 0.5 * (1.0 + r);
    const double spacing = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n + 4, 1000))) / (gamma_ - rate_);
    const double need = 2.0 / (1.0 - target) + 1.0;
    const double kd = std::ceil(std::max({spacing, need, 2.0}));
    if (!(kd < static_cast<double>(kMaxK))) {
      throw NonConvergenceError("term " + std::to_string(n) + " needs k beyond 2^62",
                                Interval{round_down(Rational(1) - partial()), 1.0});
    }
    const auto k = static_cast<std::uint64_t>(kd);
    const Rational goal = from_double(target);
    const double kk = static_cast<double>(k);
    double guess = std::floor(kk * (1.0 - std::sqrt(std::max(target - 1.0 / (kk * kk), 0.0))));
    std::uint64_t l = static_cast<std::uint64_t>(std::clamp(guess, 1.0, kk - 1.0));
    while (l > 1 && defect(l, k) < goal) --l;
    while (l + 1 < k && defect(l + 1, k) >= goal) ++l;
    while (l > 1 && defect(l, k) < remaining_) --l;
    if (defect(l, k) < remaining_) throw NumericalError("construct_bs: no admissible term at n=" + std::to_string(n));
    if (!admissible(l, k, n)) {
      throw NonConvergenceError("term " + std::to_string(n) + " violates the schedule l/k < gamma 2^-n",
                                Interval{round_down(Rational(1) - partial()), 1.0});
    }
    accept(l, k);
  }

  Rational partial() const {
    Rational p = 1;
    for (const auto& [l, k] : terms_) p *= defect(l, k);
    return p;
  }

  Rational remaining_;
  double gamma_;
  Rational gamma_exact_;
  double rate_;
  bool done_ = false;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms_;
};

[[noreturn]] void schema(const std::string& pointer, const std::string& what) { throw SchemaError(pointer, what); }

}  // namespace

BsConstruction construct_bs(const Rational& s, double tol, std::size_t max_terms, std::optional<double> gamma) {
  if (s <= 1 || s >= 2) throw InvalidArgument("s must lie strictly between 1 and 2, got " + to_string(s));
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (max_terms < 1) throw InvalidArgument("max-terms must be >= 1");
  const Rational target = s - 1;
  const double rate = solve_rate(to_double(target));
  const double g = gamma.value_or(rate + std::max(rate / 4.0, 0.05));
  if (!(g > rate) || !std::isfinite(g)) {
    throw InvalidArgument("gamma " + format_decimal(g) + " is too small for s = " + to_string(s) +
                          " (needs prod (1 - gamma 2^-n)^2 < s - 1, i.e. gamma > " + format_decimal(rate) + ")");
  }
  auto gen = std::make_shared<BsGenerator>(target, g, rate);
  FactorSequence seq{[gen](std::size_t n) { return gen->factor(n); }, g};
  const TensorSequenceEnclosure enc = delta0_tensor_sequence(seq, {tol, max_terms});
  BsConstruction c;
  c.s = s;
  c.gamma = g;
  c.rate = rate;
  c.tol = tol;
  c.terms.assign(gen->terms().begin(), gen->terms().begin() + static_cast<std::ptrdiff_t>(enc.terms_used));
  c.tail_trivial = enc.tail_trivial;
  c.delta0 = enc.delta0;
  return c;
}

FactorSequence bs_factor_sequence(const BsConstruction& c) {
  auto terms = std::make_shared<std::vector<std::pair<std::uint64_t, std::uint64_t>>>(c.terms);
  const bool trivial = c.tail_trivial;
  return FactorSequence{[terms, trivial](std::size_t n) -> std::optional<FdAlgebra> {
                          if (n <= terms->size()) {
                            const auto [l, k] = (*terms)[n - 1];
                            return FdAlgebra::corner_pair(static_cast<std::int64_t>(l), static_cast<std::int64_t>(k));
                          }
                          if (trivial) return std::nullopt;
                          throw InvalidArgument("the stored sequence has only " + std::to_string(terms->size()) +
                                                " terms");
                        },
                        c.gamma};
}

TensorSequenceEnclosure evaluate_bs(const BsConstruction& c, double tol) {
  return delta0_tensor_sequence(bs_factor_sequence(c), {tol, c.terms.size() + (c.tail_trivial ? 1 : 0)});
}

Json bs_to_json(const BsConstruction& c) {
  Json terms = Json::array();
  for (const auto& [l, k] : c.terms) terms.push_back({l, k});
  return Json{{"kind", "bs-sequence"},
              {"s", to_string(c.s)},
              {"gamma", c.gamma},
              {"rate", c.rate},
              {"tol", c.tol},
              {"terms", terms},
              {"tailTrivial", c.tail_trivial},
              {"delta0", interval_to_json(c.delta0)}};
}

bool is_bs_json(const Json& j) {
  return j.is_object() && j.contains("kind") && j["kind"].is_string() && j["kind"] == "bs-sequence";
}

BsConstruction bs_from_json(const Json& j) {
  if (!is_bs_json(j)) schema("/kind", "expected \"bs-sequence\"");
  BsConstruction c;
  if (!j.contains("s") || !j["s"].is_string()) schema("/s", "expected a rational string");
  try {
    c.s = parse_rational(j["s"].get<std::string>());
  } catch (const ParseError& e) {
    schema("/s", e.what());
  }
  if (c.s <= 1 || c.s >= 2) schema("/s", "s must lie in (1, 2)");
  if (!j.contains("gamma") || !j["gamma"].is_number() || !(j["gamma"].get<double>() > 0)) {
    schema("/gamma", "expected a positive number");
  }
  c.gamma = j["gamma"].get<double>();
  if (j.contains("rate")) {
    if (!j["rate"].is_number()) schema("/rate", "expected a number");
    c.rate = j["rate"].get<double>();
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0)) schema("/tol", "expected a positive number");
    c.tol = j["tol"].get<double>();
  }
  if (!j.contains("terms") || !j["terms"].is_array()) schema("/terms", "expected an array of [l, k] pairs");
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const Json& t = j["terms"][i];
    const std::string p = "/terms/" + std::to_string(i);
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned()) {
      schema(p, "expected [l, k] with non-negative integers");
    }
    const auto l = t[0].get<std::uint64_t>();
    const auto k = t[1].get<std::uint64_t>();
    if (l < 1 || l >= k || k > kMaxK) schema(p, "expected 1 <= l < k");
    c.terms.emplace_back(l, k);
  }
  if (j.contains("tailTrivial")) {
    if (!j["tailTrivial"].is_boolean()) schema("/tailTrivial", "expected a boolean");
    c.tail_trivial = j["tailTrivial"].get<bool>();
  }
  if (c.terms.empty() && !c.tail_trivial) schema("/terms", "a non-trivial sequence needs at least one term");
  return c;
}

FtConstruction construct_ft(const Rational& t, std::optional<Rational> phi) {
  if (t < 2) throw InvalidArgument("t must be >= 2, got " + to_string(t));
  FtConstruction out;
  out.t = t;
  if (phi) {
    if (*phi <= 0 || *phi > 1) throw InvalidArgument("phi must lie in (0, 1]");
    out.phi = *phi;
    out.s = Rational(1) + (t - 1) * *phi * *phi;
    if (out.s <= 1 || out.s >= 2) {
      throw InvalidArgument("phi = " + to_string(*phi) + " gives s = " + to_string(out.s) + ", outside (1, 2)");
    }
  } else {
    const Rational lo(Integer(11), Integer(10));
    const Rational hi(Integer(19), Integer(10));
    bool found = false;
    for (std::int64_t q = 2; !found; ++q) {
      if (q > 100000000) throw InvalidArgument("no trace found for t = " + to_string(t));
      for (std::int64_t p = 1; p < q && !found; ++p) {
        const Rational f = make_rational(p, q);
        if (denominator(f) != Integer(q)) continue;
        const Rational s = Rational(1) + (t - 1) * f * f;
        if (s > hi) break;
        if (s >= lo) {
          out.phi = f;
          out.s = s;
          found = true;
        }
      }
    }
  }
  out.expr = make_corner(make_amalgam_vn(make_diffuse(), make_diffuse(), make_bs(out.s)), out.phi);
  out.dim = delta0_vn(*out.expr);
  if (!contains(out.dim.value, t)) {
    throw NumericalError("corner evaluated to " + to_string(out.dim.value) + " instead of " + to_string(t));
  }
  return out;
}

}  // namespace freedim
