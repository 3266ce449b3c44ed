#pragma once

#include "fdim/random.hpp"
#include "fdim/representation.hpp"

#include <string>
#include <vector>

namespace freedim {

/// Haar-distributed c x c unitary (Ginibre, QR, then phases fixed so R has
/// a positive diagonal).
ComplexMatrix haar_unitary(std::int64_t c, Rng& rng);

/// (+)_l (1_{m_l} (x) W_l) with independent Haar W_l on U(c_l).
ComplexMatrix haar_on_commutant(const Representation& r, Rng& rng);

/// n x n complex Gaussian matrix, entries of variance 1/n.
ComplexMatrix ginibre(std::int64_t n, Rng& rng);

/// Polar part of Y = sum_l alpha_l^{-1/2} sum_q pi(e_q1) Z pi(e_1q) for a
/// Ginibre Z, alpha_l = w_l / m_l. Y lies in the commutant of pi(D) and is
/// inverted blockwise via SVD.
ComplexMatrix compressed_polar_unitary(const Representation& r, Rng& rng);

/// ||U^* U - 1||.
double unitarity_residual(const ComplexMatrix& u);
/// max over matrix units e of ||[V, pi(e)]||.
double commutation_residual(const Representation& r, const ComplexMatrix& v);

/// Reduced word in generators a_1..a_p: letter j > 0 is a_j, -j its inverse.
class GroupWord {
 public:
  GroupWord() = default;
  /// Throws InvalidArgument if the word is not reduced, uses a letter 0 or
  /// a generator beyond p, or p < 1.
  GroupWord(std::vector<int> letters, int generators);

  const std::vector<int>& letters() const noexcept { return letters_; }
  int generators() const noexcept { return generators_; }
  bool trivial() const noexcept { return letters_.empty(); }
  std::string to_string() const;

 private:
  std::vector<int> letters_;
  int generators_ = 1;
};

/// v^g for the representation a_j -> unitaries[j-1].
ComplexMatrix eval_group_word(const GroupWord& g, const std::vector<ComplexMatrix>& unitaries);

}  // namespace freedim
