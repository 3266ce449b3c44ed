#pragma once

#include "fdim/algebra.hpp"
#include "fdim/dim_calculus.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace freedim {

/// A finite prefix of the factors C (+) M_l(C) in M_k(C) whose infinite
/// tensor product B_s satisfies delta0(B_s) = 2 - s.
struct BsConstruction {
  Rational s;
  double gamma = 1.0;  ///< every term has l/k < gamma 2^-n
  double rate = 0.0;   ///< nominal tail rate used to aim each term
  double tol = 1e-6;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms;  ///< (l(n), k(n))
  bool tail_trivial = false;  ///< the product is exact; later factors are C
  Interval delta0;            ///< certified enclosure of 2 - s
};

/// Greedy construction; the enclosure is certified by delta0_tensor_sequence.
/// Throws InvalidArgument unless 1 < s < 2 and tol > 0 (or gamma is too small
/// for s), NonConvergenceError if max_terms does not reach tol.
BsConstruction construct_bs(const Rational& s, double tol = 1e-6, std::size_t max_terms = 200,
                            std::optional<double> gamma = std::nullopt);

/// The stored prefix as a factor sequence (the tail is trivial only when
/// the construction is exact).
FactorSequence bs_factor_sequence(const BsConstruction& c);

/// Certified enclosure from the stored prefix alone.
TensorSequenceEnclosure evaluate_bs(const BsConstruction& c, double tol);

Json bs_to_json(const BsConstruction& c);
/// True if `j` looks like a tensor-sequence document.
bool is_bs_json(const Json& j);
BsConstruction bs_from_json(const Json& j);

struct FtConstruction {
  Rational t;
  Rational phi;  ///< trace of the corner projection
  Rational s;    ///< inner parameter, s = 1 + (t - 1) phi^2
  VnPtr expr;    ///< (corner (amalgam-vn (diffuse) (diffuse) over (bs s)) phi)
  DimResult dim;
};

/// t >= 2. Without `phi`, picks the smallest denominator (then numerator)
/// with s in [11/10, 19/10]. Throws InvalidArgument if an explicit phi
/// puts s outside (1, 2).
FtConstruction construct_ft(const Rational& t, std::optional<Rational> phi = std::nullopt);

}  // namespace freedim
