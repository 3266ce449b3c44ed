#include "fdim/representation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <optional>

namespace freedim {

// ---------------------------------------------------------------------------
// DElement

DElement DElement::zero(const FdAlgebra& a) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(a.block_count());
  for (const Block& b : a.blocks()) blocks.push_back(ComplexMatrix::Zero(b.dim, b.dim));
  return DElement(std::move(blocks));
}

DElement DElement::identity(const FdAlgebra& a) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(a.block_count());
  for (const Block& b : a.blocks()) blocks.push_back(ComplexMatrix::Identity(b.dim, b.dim));
  return DElement(std::move(blocks));
}

DElement DElement::matrix_unit(const FdAlgebra& a, std::size_t block, std::int64_t p, std::int64_t q) {
  DElement d = zero(a);
  const std::int64_t m = a.blocks().at(block).dim;
  if (p < 0 || q < 0 || p >= m || q >= m) throw InvalidArgument("matrix unit index out of range");
  d.blocks_[block](p, q) = 1.0;
  return d;
}

DElement DElement::central_projection(const FdAlgebra& a, std::size_t block) {
  DElement d = zero(a);
  d.blocks_.at(block).setIdentity();
  return d;
}

void DElement::check_shape(const FdAlgebra& a) const {
  if (blocks_.size() != a.block_count()) throw ShapeMismatch("DElement block count does not match algebra");
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const auto m = a.blocks()[l].dim;
    if (blocks_[l].rows() != m || blocks_[l].cols() != m) {
      throw ShapeMismatch("DElement block " + std::to_string(l) + " has wrong shape");
    }
  }
}

bool DElement::same_shape(const DElement& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    if (blocks_[l].rows() != other.blocks_[l].rows() || blocks_[l].cols() != other.blocks_[l].cols()) return false;
  }
  return true;
}

DElement DElement::adjoint() const {
  std::vector<ComplexMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return DElement(std::move(out));
}

double DElement::operator_norm() const {
  double best = 0.0;
  for (const auto& b : blocks_) best = std::max(best, freedim::operator_norm(b));
  return best;
}

double DElement::max_abs() const {
  double best = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() > 0) best = std::max(best, b.cwiseAbs().maxCoeff());
  }
  return best;
}

bool DElement::is_exact_zero() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const ComplexMatrix& b) { return b.isZero(0.0); });
}

DElement& DElement::operator+=(const DElement& o) {
  if (!same_shape(o)) throw ShapeMismatch("DElement shapes differ in addition");
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] += o.blocks_[l];
  return *this;
}

DElement& DElement::operator-=(const DElement& o) {
  if (!same_shape(o)) throw ShapeMismatch("DElement shapes differ in subtraction");
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] -= o.blocks_[l];
  return *this;
}

DElement& DElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

DElement operator*(const DElement& a, const DElement& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("DElement shapes differ in multiplication");
  std::vector<ComplexMatrix> out;
  out.reserve(a.block_count());
  for (std::size_t l = 0; l < a.block_count(); ++l) out.push_back(a.block(l) * b.block(l));
  return DElement(std::move(out));
}

// ---------------------------------------------------------------------------
// Representation

Representation::Representation(FdAlgebra algebra, std::vector<std::int64_t> multiplicities)
    : algebra_(std::move(algebra)), mult_(std::move(multiplicities)) {
  if (!algebra_.purely_atomic()) throw UnsupportedOperand("cannot represent an algebra with a diffuse summand");
  if (mult_.size() != algebra_.block_count()) throw ShapeMismatch("one multiplicity per block is required");
  offset_.reserve(mult_.size());
  for (std::size_t l = 0; l < mult_.size(); ++l) {
    if (mult_[l] < 1) throw InvalidArgument("multiplicities must be >= 1");
    offset_.push_back(n_);
    n_ += algebra_.blocks()[l].dim * mult_[l];
  }
}

Rational Representation::trace_weight(std::size_t l) const {
  return Rational(Integer(block_dim(l) * multiplicity(l)), Integer(n_));
}

Rational Representation::max_trace_deviation() const {
  Rational worst = 0;
  for (std::size_t l = 0; l < mult_.size(); ++l) {
    Rational dev = trace_weight(l) - algebra_.blocks()[l].weight;
    if (dev < 0) dev = -dev;
    worst = std::max(worst, dev);
  }
  return worst;
}

Complex Representation::trace(const DElement& d) const {
  d.check_shape(algebra_);
  Complex sum = 0.0;
  for (std::size_t l = 0; l < mult_.size(); ++l) {
    sum += static_cast<double>(mult_[l]) * d.block(l).trace();
  }
  return sum / static_cast<double>(n_);
}

namespace {

// Optimal multiplicities for a fixed total n. Deviations are compared as the
// exact integers |m c Q - w Q n| where Q clears every weight denominator.
std::optional<std::vector<std::int64_t>> allocate(const FdAlgebra& a, std::int64_t n) {
  const auto& blocks = a.blocks();
  const std::size_t L = blocks.size();
  Integer Q = 1;
  for (const Block& b : blocks) Q = boost::multiprecision::lcm(Q, boost::multiprecision::denominator(b.weight));

  auto deviation = [&](std::size_t l, std::int64_t c) {
    const Rational scaled = blocks[l].weight * Rational(Q) * Rational(Integer(n));
    Integer dev = Integer(blocks[l].dim) * c * Q - boost::multiprecision::numerator(scaled);
    return dev < 0 ? Integer(-dev) : dev;
  };

  const auto width = static_cast<std::size_t>(n + 1);
  // Phase 1: minimal achievable max deviation (suffix DP, exact).
  std::vector<std::vector<std::optional<Integer>>> worst(L + 1, std::vector<std::optional<Integer>>(width));
  worst[L][0] = Integer(0);
  for (std::size_t l = L; l-- > 0;) {
    const std::int64_t m = blocks[l].dim;
    for (std::int64_t s = 0; s <= n; ++s) {
      std::optional<Integer> best;
      for (std::int64_t c = 1; m * c <= s; ++c) {
        const auto& rest = worst[l + 1][static_cast<std::size_t>(s - m * c)];
        if (!rest) continue;
        Integer value = std::max(deviation(l, c), *rest);
        if (!best || value < *best) best = std::move(value);
      }
      worst[l][static_cast<std::size_t>(s)] = std::move(best);
    }
  }
  if (!worst[0][static_cast<std::size_t>(n)]) return std::nullopt;
  const Integer cap = *worst[0][static_cast<std::size_t>(n)];

  // Phase 2: minimal deviation sum with every deviation <= cap.
  std::vector<std::vector<std::optional<Integer>>> total(L + 1, std::vector<std::optional<Integer>>(width));
  total[L][0] = Integer(0);
  for (std::size_t l = L; l-- > 0;) {
    const std::int64_t m = blocks[l].dim;
    for (std::int64_t s = 0; s <= n; ++s) {
      std::optional<Integer> best;
      for (std::int64_t c = 1; m * c <= s; ++c) {
        const auto& rest = total[l + 1][static_cast<std::size_t>(s - m * c)];
        if (!rest) continue;
        Integer dev = deviation(l, c);
        if (dev > cap) continue;
        Integer value = dev + *rest;
        if (!best || value < *best) best = std::move(value);
      }
      total[l][static_cast<std::size_t>(s)] = std::move(best);
    }
  }

  // Reconstruct, preferring the largest c at each block.
  std::vector<std::int64_t> mult(L);
  std::int64_t s = n;
  for (std::size_t l = 0; l < L; ++l) {
    const std::int64_t m = blocks[l].dim;
    const Integer target = *total[l][static_cast<std::size_t>(s)];
    bool found = false;
    for (std::int64_t c = s / m; c >= 1; --c) {
      const auto& rest = total[l + 1][static_cast<std::size_t>(s - m * c)];
      if (!rest) continue;
      const Integer dev = deviation(l, c);
      if (dev > cap || dev + *rest != target) continue;
      mult[l] = c;
      s -= m * c;
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return mult;
}

}  // namespace

Representation make_representation(const FdAlgebra& a, std::int64_t target_dim) {
  if (!a.purely_atomic()) throw UnsupportedOperand("cannot represent an algebra with a diffuse summand");
  const std::int64_t minimal = a.minimal_dim();
  if (target_dim < minimal) {
    throw InvalidArgument("target dimension " + std::to_string(target_dim) + " is smaller than " +
                          std::to_string(minimal) + " (one copy of every block)");
  }
  // Largest n <= target_dim of the form sum m_l c_l with every c_l >= 1.
  std::vector<char> reach(static_cast<std::size_t>(target_dim + 1), 0);
  reach[0] = 1;
  for (const Block& b : a.blocks()) {
    std::vector<char> next(reach.size(), 0);
    for (std::int64_t s = 0; s <= target_dim; ++s) {
      if (!reach[static_cast<std::size_t>(s)]) continue;
      for (std::int64_t t = s + b.dim; t <= target_dim; t += b.dim) next[static_cast<std::size_t>(t)] = 1;
    }
    reach = std::move(next);
  }
  std::int64_t n = target_dim;
  while (n > 0 && !reach[static_cast<std::size_t>(n)]) --n;
  auto mult = allocate(a, n);
  if (!mult) throw InvalidArgument("no feasible multiplicity allocation");
  return Representation(a, std::move(*mult));
}

ComplexMatrix embed(const Representation& r, const DElement& d) {
  d.check_shape(r.algebra());
  const auto n = r.total_dim();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t l = 0; l < d.block_count(); ++l) {
    const std::int64_t m = r.block_dim(l);
    const std::int64_t c = r.multiplicity(l);
    const std::int64_t off = r.offset(l);
    const ComplexMatrix& a = d.block(l);
    for (std::int64_t p = 0; p < m; ++p) {
      for (std::int64_t q = 0; q < m; ++q) {
        if (a(p, q) == Complex(0.0)) continue;
        for (std::int64_t i = 0; i < c; ++i) out(off + p * c + i, off + q * c + i) = a(p, q);
      }
    }
  }
  return out;
}

DElement cond_expect(const Representation& r, const ComplexMatrix& x) {
  const auto n = r.total_dim();
  if (x.rows() != n || x.cols() != n) {
    throw ShapeMismatch("matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                        ", representation dimension is " + std::to_string(n));
  }
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(r.multiplicities().size());
  for (std::size_t l = 0; l < r.multiplicities().size(); ++l) {
    const std::int64_t m = r.block_dim(l);
    const std::int64_t c = r.multiplicity(l);
    const std::int64_t off = r.offset(l);
    ComplexMatrix e(m, m);
    for (std::int64_t p = 0; p < m; ++p) {
      for (std::int64_t q = 0; q < m; ++q) {
        e(p, q) = x.block(off + p * c, off + q * c, c, c).diagonal().sum() / static_cast<double>(c);
      }
    }
    blocks.push_back(std::move(e));
  }
  return DElement(std::move(blocks));
}

std::vector<ComplexMatrix> center_matrices(const Representation& r, const std::vector<ComplexMatrix>& xs) {
  std::vector<ComplexMatrix> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x - embed(r, cond_expect(r, x)));
  return out;
}

Complex normalized_trace(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) throw ShapeMismatch("trace of a non-square matrix");
  return x.trace() / static_cast<double>(x.rows());
}

double operator_norm(const ComplexMatrix& x) {
  if (x.size() == 0) return 0.0;
  if (x.rows() == 1 && x.cols() == 1) return std::abs(x(0, 0));
  if (x.rows() <= 8 && x.cols() <= 8) {
    Eigen::JacobiSVD<ComplexMatrix> svd(x);
    return svd.singularValues()(0);
  }
  const ComplexMatrix gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

}  // namespace freedim
