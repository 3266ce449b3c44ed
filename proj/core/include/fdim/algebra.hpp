#pragma once

#include "fdim/errors.hpp"
#include "fdim/interval.hpp"
#include "fdim/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace freedim {

/// One matrix summand M_m(C) of a finite-dimensional algebra together with
/// the trace of its central projection.
struct Block {
  std::int64_t dim = 1;
  Rational weight;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Finite-dimensional tracial algebra D = (+)_l M_{m_l}(C), optionally
/// direct-summed with a diffuse hyperfinite part that carries only a weight.
///
/// Invariants (checked on construction): every block has dim >= 1 and
/// weight > 0; 0 <= diffuse < 1 unless there are no blocks, in which case
/// diffuse == 1; diffuse + sum of weights == 1 exactly.
class FdAlgebra {
 public:
  FdAlgebra(std::vector<Block> blocks, Rational diffuse = Rational(0));

  /// The scalars C.
  static FdAlgebra scalars();
  /// The diffuse hyperfinite algebra (no atomic part).
  static FdAlgebra diffuse();
  /// M_m(C) with full weight.
  static FdAlgebra full_matrix(std::int64_t m);
  /// C (+) M_l(C) with central weights (1 - l/k, l/k), 1 <= l < k.
  static FdAlgebra corner_pair(std::int64_t l, std::int64_t k);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Rational& diffuse_weight() const noexcept { return diffuse_; }
  bool purely_atomic() const { return diffuse_ == 0; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  /// Sum of block dimensions, the smallest faithful representation size.
  std::int64_t minimal_dim() const;

  /// sum_l w_l^2 / m_l^2.
  Rational defect() const;

  friend bool operator==(const FdAlgebra&, const FdAlgebra&) = default;

 private:
  std::vector<Block> blocks_;
  Rational diffuse_;
};

/// Free entropy dimension of a hyperfinite algebra: 1 - sum_l w_l^2/m_l^2.
Rational delta0_hyperfinite(const FdAlgebra& a);

/// Tensor product; blocks are all pairs (m_l m'_j, w_l w'_j) ordered with
/// the left factor's index outermost. Throws UnsupportedOperand if either
/// operand has a diffuse summand.
FdAlgebra tensor(const FdAlgebra& a, const FdAlgebra& b);

/// Lazily produced tensor factors B_1, B_2, ... of an infinite tensor
/// product. `factor(n)` (n >= 1) returns the n-th factor, or nullopt once
/// every remaining factor is C. `gamma` certifies the tail: every factor
/// satisfies defect_n >= (1 - gamma 2^-n)^2.
struct FactorSequence {
  std::function<std::optional<FdAlgebra>(std::size_t)> factor;
  double gamma = 1.0;
};

/// Raised when a certified enclosure cannot be tightened to the requested
/// tolerance within the term budget; `best()` is the tightest one found.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, Interval best) : Error(what), best_(best) {}
  const Interval& best() const noexcept { return best_; }
  int exit_code() const noexcept override { return 3; }

 private:
  Interval best_;
};

struct TensorSequenceOptions {
  double tol = 1e-6;
  std::size_t max_terms = 200;
};

struct TensorSequenceEnclosure {
  Interval delta0;            ///< encloses 1 - prod_n defect_n
  std::size_t terms_used = 0;  ///< factors read from the sequence
  Rational partial_product;   ///< exact prod_{n <= terms_used} defect_n
  bool tail_trivial = false;   ///< sequence reported all remaining factors are C
};

/// Encloses delta0 of the infinite tensor product 1 - prod_n defect_n in an
/// interval of width <= tol. Partial products are exact; the tail is bounded
/// below by exp(2 sum_{n>N} log(1 - gamma 2^-n)) with outward rounding.
TensorSequenceEnclosure delta0_tensor_sequence(const FactorSequence& factors,
                                               const TensorSequenceOptions& options = {});

/// Lower bound on prod_{n > first_excluded} (1 - gamma 2^-n)^2, rounded down.
double schedule_tail_lower_bound(double gamma, std::size_t after_n);

}  // namespace freedim
