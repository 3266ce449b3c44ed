#include <doctest.h>

#include <fdim/errors.hpp>
#include <fdim/random.hpp>
#include <fdim/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace freedim;

namespace {

/// Kolmogorov-Smirnov statistic of angles in (-pi, pi] against the uniform law.
double ks_uniform_angles(std::vector<double> angles) {
  std::sort(angles.begin(), angles.end());
  const double n = static_cast<double>(angles.size());
  double d = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double f = (angles[i] + std::numbers::pi) / (2 * std::numbers::pi);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d * std::sqrt(n);
}

void collect_angles(const ComplexMatrix& u, std::vector<double>& out) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(u);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::arg(es.eigenvalues()(i)));
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("streams are reproducible and distinct") {
  const Rng master(42);
  Rng a = master.stream("decay", 64, 3);
  Rng b = master.stream("decay", 64, 3);
  Rng c = master.stream("decay", 64, 4);
  Rng d = master.stream("asfree", 64, 3);
  const double x = a.normal();
  CHECK(x == b.normal());
  CHECK(x != c.normal());
  CHECK(x != d.normal());
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("Haar unitary eigenvalue angles are uniform") {
  Rng rng(1);
  std::vector<double> angles;
  for (int t = 0; t < 300; ++t) {
    const ComplexMatrix u = haar_unitary(8, rng);
    CHECK(unitarity_residual(u) < 1e-12);
    collect_angles(u, angles);
  }
  // 1% critical value of the limiting Kolmogorov distribution.
  CHECK(ks_uniform_angles(angles) < 1.63);
}

TEST_CASE("polar part over the scalars is Haar") {
  Rng rng(2);
  const Representation r(FdAlgebra::scalars(), {8});
  std::vector<double> angles;
  for (int t = 0; t < 300; ++t) {
    const ComplexMatrix v = compressed_polar_unitary(r, rng);
    CHECK(unitarity_residual(v) < 1e-10);
    collect_angles(v, angles);
  }
  CHECK(ks_uniform_angles(angles) < 1.63);
}

TEST_CASE("commutant samplers commute with the image of D") {
  Rng rng(3);
  const FdAlgebra a({Block{1, Rational(1, 4)}, Block{2, Rational(1, 2)}, Block{1, Rational(1, 4)}});
  const Representation r(a, {3, 2, 5});
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix v = haar_on_commutant(r, rng);
    CHECK(unitarity_residual(v) < 1e-12);
    CHECK(commutation_residual(r, v) < 1e-12);
    const ComplexMatrix p = compressed_polar_unitary(r, rng);
    CHECK(unitarity_residual(p) < 1e-10);
    CHECK(commutation_residual(r, p) < 1e-10);
  }
  const ComplexMatrix z = ComplexMatrix::Random(r.total_dim(), r.total_dim());
  CHECK(commutation_residual(r, z) > 0.1);
}

TEST_CASE("Ginibre second moment") {
  Rng rng(4);
  const std::int64_t n = 32;
  double m1 = 0.0;
  double m2 = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix z = ginibre(n, rng);
    m1 += std::abs(normalized_trace(z));
    m2 += normalized_trace(z * z.adjoint()).real();
  }
  // tr(Z Z*) has mean 1 and standard deviation 1/n per sample.
  CHECK(std::abs(m2 / trials - 1.0) < 5.0 / (n * std::sqrt(trials)));
  CHECK(m1 / trials < 5.0 / n);
}

TEST_CASE("group words") {
  CHECK_THROWS_AS(GroupWord({1, -1}, 2), InvalidArgument);
  CHECK_THROWS_AS(GroupWord({3}, 2), InvalidArgument);
  CHECK_THROWS_AS(GroupWord({0}, 2), InvalidArgument);
  Rng rng(5);
  const ComplexMatrix a = haar_unitary(4, rng);
  const ComplexMatrix b = haar_unitary(4, rng);
  const GroupWord w({1, 2, 2, -1}, 2);
  CHECK((eval_group_word(w, {a, b}) - a * b * b * a.adjoint()).norm() < 1e-12);
  CHECK(eval_group_word(GroupWord({}, 2), {a, b}).isApprox(ComplexMatrix::Identity(4, 4)));
}

}  // TEST_SUITE
