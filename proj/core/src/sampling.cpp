#include "fdim/sampling.hpp"

#include "fdim/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <cstdlib>

namespace freedim {

namespace {

constexpr double kUnitaryTolerance = 1e-10;

void fill_gaussian(ComplexMatrix& z, double sigma, Rng& rng) {
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(sigma * re, sigma * im);
    }
  }
}

}  // namespace

ComplexMatrix haar_unitary(std::int64_t c, Rng& rng) {
  if (c < 1) throw InvalidArgument("haar_unitary requires c >= 1");
  ComplexMatrix z(c, c);
  fill_gaussian(z, std::sqrt(0.5), rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < c; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a == 0.0) throw NumericalError("haar_unitary: singular Ginibre sample");
    q.col(j) *= d / a;
  }
  const double residual = unitarity_residual(q);
  if (!(residual <= kUnitaryTolerance)) {
    throw NumericalError("haar_unitary: unitarity residual " + std::to_string(residual));
  }
  return q;
}

ComplexMatrix haar_on_commutant(const Representation& r, Rng& rng) {
  const auto n = r.total_dim();
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (std::size_t l = 0; l < r.algebra().block_count(); ++l) {
    const auto m = r.block_dim(l);
    const auto c = r.multiplicity(l);
    const ComplexMatrix w = haar_unitary(c, rng);
    for (std::int64_t p = 0; p < m; ++p) v.block(r.offset(l) + p * c, r.offset(l) + p * c, c, c) = w;
  }
  return v;
}

ComplexMatrix ginibre(std::int64_t n, Rng& rng) {
  if (n < 1) throw InvalidArgument("ginibre requires n >= 1");
  ComplexMatrix z(n, n);
  fill_gaussian(z, std::sqrt(0.5 / static_cast<double>(n)), rng);
  return z;
}

ComplexMatrix compressed_polar_unitary(const Representation& r, Rng& rng) {
  const FdAlgebra& d = r.algebra();
  const auto n = r.total_dim();
  for (int attempt = 0; attempt < 2; ++attempt) {
    ComplexMatrix z = ginibre(n, rng);
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (std::size_t l = 0; l < d.block_count(); ++l) {
      const auto m = r.block_dim(l);
      const double alpha = to_double(d.blocks()[l].weight) / static_cast<double>(m);
      for (std::int64_t q = 0; q < m; ++q) {
        const ComplexMatrix eq1 = embed(r, DElement::matrix_unit(d, l, q, 0));
        const ComplexMatrix e1q = embed(r, DElement::matrix_unit(d, l, 0, q));
        y += (eq1 * z * e1q) / std::sqrt(alpha);
      }
    }
    // Y = (+)_l alpha_l^{-1/2} 1_m (x) Z_l, so the polar part is taken on the
    // first multiplicity block of each summand and repeated.
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    bool singular = false;
    for (std::size_t l = 0; l < d.block_count() && !singular; ++l) {
      const auto m = r.block_dim(l);
      const auto c = r.multiplicity(l);
      const ComplexMatrix yl = y.block(r.offset(l), r.offset(l), c, c);
      Eigen::JacobiSVD<ComplexMatrix> svd(yl, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      if (s(c - 1) <= 1e-12 * s(0)) {
        singular = true;
        break;
      }
      const ComplexMatrix w = svd.matrixU() * svd.matrixV().adjoint();
      for (std::int64_t p = 0; p < m; ++p) v.block(r.offset(l) + p * c, r.offset(l) + p * c, c, c) = w;
    }
    if (!singular) return v;
  }
  throw NumericalError("compressed_polar_unitary: singular Y block after retry");
}

double unitarity_residual(const ComplexMatrix& u) {
  return operator_norm(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

double commutation_residual(const Representation& r, const ComplexMatrix& v) {
  const FdAlgebra& d = r.algebra();
  double worst = 0.0;
  for (std::size_t l = 0; l < d.block_count(); ++l) {
    const auto m = r.block_dim(l);
    for (std::int64_t p = 0; p < m; ++p) {
      for (std::int64_t q = 0; q < m; ++q) {
        const ComplexMatrix e = embed(r, DElement::matrix_unit(d, l, p, q));
        worst = std::max(worst, operator_norm(v * e - e * v));
      }
    }
  }
  return worst;
}

GroupWord::GroupWord(std::vector<int> letters, int generators)
    : letters_(std::move(letters)), generators_(generators) {
  if (generators_ < 1) throw InvalidArgument("a group word needs at least one generator");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const int a = letters_[i];
    if (a == 0 || std::abs(a) > generators_) {
      throw InvalidArgument("letter " + std::to_string(a) + " outside generators 1.." + std::to_string(generators_));
    }
    if (i > 0 && letters_[i - 1] == -a) throw InvalidArgument("group word is not reduced: " + to_string());
  }
}

std::string GroupWord::to_string() const {
  std::string out;
  for (int a : letters_) {
    if (!out.empty()) out += ' ';
    out += "a" + std::to_string(std::abs(a));
    if (a < 0) out += "^-1";
  }
  return out.empty() ? "e" : out;
}

ComplexMatrix eval_group_word(const GroupWord& g, const std::vector<ComplexMatrix>& unitaries) {
  if (static_cast<int>(unitaries.size()) != g.generators()) {
    throw ShapeMismatch("expected " + std::to_string(g.generators()) + " unitaries, got " +
                        std::to_string(unitaries.size()));
  }
  const auto n = unitaries.front().rows();
  for (const auto& u : unitaries) {
    if (u.rows() != n || u.cols() != n) throw ShapeMismatch("unitaries must be square of equal size");
  }
  ComplexMatrix out = ComplexMatrix::Identity(n, n);
  for (int a : g.letters()) {
    const ComplexMatrix& u = unitaries[static_cast<std::size_t>(std::abs(a) - 1)];
    if (a > 0) {
      out = out * u;
    } else {
      out = out * u.adjoint();
    }
  }
  return out;
}

}  // namespace freedim
