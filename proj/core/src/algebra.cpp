#include "fdim/algebra.hpp"

#include <cmath>
#include <limits>

namespace freedim {

FdAlgebra::FdAlgebra(std::vector<Block> blocks, Rational diffuse)
    : blocks_(std::move(blocks)), diffuse_(std::move(diffuse)) {
  if (diffuse_ < 0 || diffuse_ > 1) throw InvalidArgument("diffuse weight must lie in [0, 1]");
  Rational total = diffuse_;
  for (const Block& b : blocks_) {
    if (b.dim < 1) throw InvalidArgument("block dimension must be >= 1");
    if (b.weight <= 0) throw InvalidArgument("block weight must be > 0");
    total += b.weight;
  }
  if (total != 1) {
    throw InvalidArgument("weights must sum to 1 exactly (got " + to_string(total) + ")");
  }
  if (blocks_.empty() && diffuse_ != 1) throw InvalidArgument("empty block list requires diffuse weight 1");
}

FdAlgebra FdAlgebra::scalars() { return FdAlgebra({Block{1, Rational(1)}}); }

FdAlgebra FdAlgebra::diffuse() { return FdAlgebra({}, Rational(1)); }

FdAlgebra FdAlgebra::full_matrix(std::int64_t m) { return FdAlgebra({Block{m, Rational(1)}}); }

FdAlgebra FdAlgebra::corner_pair(std::int64_t l, std::int64_t k) {
  if (l < 1 || l >= k) throw InvalidArgument("corner_pair requires 1 <= l < k");
  const Rational frac = make_rational(l, k);
  return FdAlgebra({Block{1, Rational(1) - frac}, Block{l, frac}});
}

std::int64_t FdAlgebra::minimal_dim() const {
  std::int64_t total = 0;
  for (const Block& b : blocks_) total += b.dim;
  return total;
}

Rational FdAlgebra::defect() const {
  Rational sum = 0;
  for (const Block& b : blocks_) {
    const Rational m{Integer(b.dim)};
    sum += b.weight * b.weight / (m * m);
  }
  return sum;
}

Rational delta0_hyperfinite(const FdAlgebra& a) { return Rational(1) - a.defect(); }

FdAlgebra tensor(const FdAlgebra& a, const FdAlgebra& b) {
  if (!a.purely_atomic() || !b.purely_atomic()) {
    throw UnsupportedOperand("tensor product of an algebra with a diffuse summand is not supported");
  }
  std::vector<Block> blocks;
  blocks.reserve(a.block_count() * b.block_count());
  for (const Block& x : a.blocks()) {
    for (const Block& y : b.blocks()) blocks.push_back(Block{x.dim * y.dim, x.weight * y.weight});
  }
  return FdAlgebra(std::move(blocks));
}

double schedule_tail_lower_bound(double gamma, std::size_t after_n) {
  if (gamma <= 0) return 1.0;
  const double first = std::ldexp(gamma, -static_cast<int>(after_n + 1));
  if (first >= 1.0) return 0.0;
  constexpr int kExplicitTerms = 64;
  double sum = 0.0;
  for (int j = 1; j <= kExplicitTerms; ++j) {
    sum += std::log1p(-std::ldexp(gamma, -static_cast<int>(after_n) - j));
  }
  // -log(1-x) <= 2x for x <= 1/2 bounds the remaining terms.
  const double remainder = 2.0 * std::ldexp(gamma, -static_cast<int>(after_n) - kExplicitTerms);
  const double slack = std::abs(sum) * 1e-13 + 1e-300;
  const double lower_log = 2.0 * (sum - remainder - slack);
  double bound = std::exp(lower_log) * (1.0 - 1e-15);
  bound = std::nextafter(bound, 0.0);
  return bound < 0.0 ? 0.0 : bound;
}

namespace {

Interval enclosure(const Rational& partial, double tail_lower) {
  // delta0 in [1 - Q, 1 - Q * tail]
  const double lo = round_down(Rational(1) - partial);
  const double q_down = round_down(partial);
  const double product = std::nextafter(q_down * tail_lower, 0.0);
  const double hi = std::nextafter(1.0 - product, std::numeric_limits<double>::infinity());
  return {lo, hi};
}

}  // namespace

TensorSequenceEnclosure delta0_tensor_sequence(const FactorSequence& factors,
                                               const TensorSequenceOptions& options) {
  if (!(options.tol > 0)) throw InvalidArgument("tolerance must be positive");
  if (!factors.factor) throw InvalidArgument("factor sequence has no generator");
  const Rational gamma = from_double(factors.gamma);
  Rational partial = 1;
  Interval best{0.0, 1.0};
  for (std::size_t used = 0;; ++used) {
    const Interval current = enclosure(partial, schedule_tail_lower_bound(factors.gamma, used));
    if (current.width() < best.width()) best = current;
    if (current.width() <= options.tol) {
      return {current, used, partial, false};
    }
    if (used == options.max_terms) {
      throw NonConvergenceError("tail bound did not certify tolerance within " +
                                    std::to_string(options.max_terms) + " terms",
                                best);
    }
    const std::size_t n = used + 1;
    const std::optional<FdAlgebra> f = factors.factor(n);
    if (!f) {
      return {Interval::point(Rational(1) - partial), used, partial, true};
    }
    const Rational d = f->defect();
    if (d <= 0 || d > 1) throw InvalidArgument("factor " + std::to_string(n) + " has defect outside (0, 1]");
    const Rational step = gamma / Rational(Integer(1) << n);
    if (step < 1) {
      const Rational floor = (Rational(1) - step) * (Rational(1) - step);
      if (d < floor) {
        throw InvalidArgument("factor " + std::to_string(n) + " violates the tail schedule for gamma " +
                              format_decimal(factors.gamma));
      }
    }
    partial *= d;
  }
}

}  // namespace freedim
