#pragma once

#include "fdim/algebra.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace freedim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// An element of a purely atomic FdAlgebra: one m_l x m_l matrix per block.
class DElement {
 public:
  DElement() = default;
  explicit DElement(std::vector<ComplexMatrix> blocks) : blocks_(std::move(blocks)) {}

  static DElement zero(const FdAlgebra& a);
  static DElement identity(const FdAlgebra& a);
  /// Matrix unit e_{pq} (0-based) in block `block`.
  static DElement matrix_unit(const FdAlgebra& a, std::size_t block, std::int64_t p, std::int64_t q);
  /// Central projection z_l.
  static DElement central_projection(const FdAlgebra& a, std::size_t block);

  std::size_t block_count() const noexcept { return blocks_.size(); }
  const ComplexMatrix& block(std::size_t l) const { return blocks_.at(l); }
  ComplexMatrix& block(std::size_t l) { return blocks_.at(l); }
  const std::vector<ComplexMatrix>& blocks() const noexcept { return blocks_; }

  /// Throws ShapeMismatch unless block shapes match `a`.
  void check_shape(const FdAlgebra& a) const;
  bool same_shape(const DElement& other) const;

  DElement adjoint() const;
  /// max_l of the spectral norm of block l.
  double operator_norm() const;
  /// Largest absolute entry.
  double max_abs() const;
  bool is_exact_zero() const;

  DElement& operator+=(const DElement& o);
  DElement& operator-=(const DElement& o);
  DElement& operator*=(Complex s);
  friend DElement operator+(DElement a, const DElement& b) { return a += b; }
  friend DElement operator-(DElement a, const DElement& b) { return a -= b; }
  friend DElement operator*(Complex s, DElement a) { return a *= s; }
  friend DElement operator*(const DElement& a, const DElement& b);

 private:
  std::vector<ComplexMatrix> blocks_;
};

/// Unital *-representation pi(a) = (+)_l (a_l (x) 1_{c_l}) of a purely atomic
/// FdAlgebra on C^n, n = sum_l m_l c_l, in canonical block order.
class Representation {
 public:
  Representation(FdAlgebra algebra, std::vector<std::int64_t> multiplicities);

  const FdAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<std::int64_t>& multiplicities() const noexcept { return mult_; }
  std::int64_t total_dim() const noexcept { return n_; }
  /// First row/column of block l in the canonical layout.
  std::int64_t offset(std::size_t l) const { return offset_.at(l); }
  std::int64_t block_dim(std::size_t l) const { return algebra_.blocks().at(l).dim; }
  std::int64_t multiplicity(std::size_t l) const { return mult_.at(l); }

  /// tr_n(pi(z_l)) = m_l c_l / n.
  Rational trace_weight(std::size_t l) const;
  /// max_l |m_l c_l / n - w_l|.
  Rational max_trace_deviation() const;

  /// Normalised trace on D induced by the representation, tr_n o pi.
  Complex trace(const DElement& d) const;

 private:
  FdAlgebra algebra_;
  std::vector<std::int64_t> mult_;
  std::vector<std::int64_t> offset_;
  std::int64_t n_ = 0;
};

/// Chooses multiplicities c_l >= 1 with n = sum m_l c_l the largest
/// achievable value <= target_dim, minimising max_l |m_l c_l/n - w_l|
/// (ties: smaller sum of deviations, then lexicographically larger c).
/// Throws InvalidArgument if the algebra has a diffuse summand or
/// target_dim < sum m_l.
Representation make_representation(const FdAlgebra& a, std::int64_t target_dim);

/// pi(d) as an n x n block-diagonal matrix.
ComplexMatrix embed(const Representation& r, const DElement& d);

/// E_k: normalised partial trace over each multiplicity space of the
/// diagonal blocks, so that pi o E_k is the tr_n-preserving conditional
/// expectation onto pi(D).
DElement cond_expect(const Representation& r, const ComplexMatrix& x);

/// x - pi(E_k(x)) for each x.
std::vector<ComplexMatrix> center_matrices(const Representation& r, const std::vector<ComplexMatrix>& xs);

/// Normalised trace tr_n.
Complex normalized_trace(const ComplexMatrix& x);

/// Spectral norm.
double operator_norm(const ComplexMatrix& x);

}  // namespace freedim
