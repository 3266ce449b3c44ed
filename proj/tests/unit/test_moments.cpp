#include <doctest.h>

#include <fdim/errors.hpp>
#include <fdim/moments.hpp>

#include <random>
#include <sstream>

using namespace freedim;

namespace {

DElement scalar(Complex z) { return DElement({ComplexMatrix::Constant(1, 1, z)}); }
Complex value(const DElement& d) { return d.block(0)(0, 0); }

ComplexMatrix random_hermitian(std::int64_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  ComplexMatrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = Complex(nd(g), nd(g));
  return (x + x.adjoint()) / 2.0;
}

/// Free reduction of a word in u, v: true if it reduces to the identity.
bool reduces_to_identity(const std::vector<std::pair<char, bool>>& w) {
  std::vector<std::pair<char, bool>> st;
  for (const auto& x : w) {
    if (!st.empty() && st.back().first == x.first && st.back().second != x.second) {
      st.pop_back();
    } else {
      st.push_back(x);
    }
  }
  return st.empty();
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("word parsing and adjoint") {
  const NCWord w = parse_word("A:a B:b* A:c");
  REQUIRE(w.size() == 3);
  CHECK(w.to_string() == "A:a B:b* A:c");
  CHECK(w.adjoint().to_string() == "A:c* B:b A:a*");
  CHECK_THROWS(parse_word("nocolon"));
}

TEST_CASE("scalar free product against the classical formula") {
  const FdAlgebra c = FdAlgebra::scalars();
  const Complex a1(0.3, 0), a2(1.7, 0), a3(0.2, 0);
  const Complex b1(-0.4, 0), b2(2.1, 0), b3(0.5, 0);
  const auto A = std::make_shared<MomentTableSource>(
      "A", std::map<std::string, DElement>{{"", scalar(1)}, {"a", scalar(a1)}, {"a a", scalar(a2)},
                                           {"a a a", scalar(a3)}});
  const auto B = std::make_shared<MomentTableSource>(
      "B", std::map<std::string, DElement>{{"", scalar(1)}, {"b", scalar(b1)}, {"b b", scalar(b2)},
                                           {"b b b", scalar(b3)}});
  const SourceSet s{A, B};
  CHECK(std::abs(value(amalg_moment(s, c, parse_word("A:a B:b"))) - a1 * b1) < 1e-14);
  CHECK(std::abs(value(amalg_moment(s, c, parse_word("A:a A:a B:b"))) - a2 * b1) < 1e-14);
  const Complex abab = a2 * b1 * b1 + a1 * a1 * b2 - a1 * a1 * b1 * b1;
  CHECK(std::abs(value(amalg_moment(s, c, parse_word("A:a B:b A:a B:b"))) - abab) < 1e-14);
  // phi(a b a^2 b) = phi(a^3) phi(b)^2 + phi(a) phi(a^2) phi(b^2) - phi(a) phi(a^2) phi(b)^2.
  const Complex ab2 = a3 * b1 * b1 + a1 * a2 * b2 - a1 * a2 * b1 * b1;
  CHECK(std::abs(value(amalg_moment(s, c, parse_word("A:a B:b A:a A:a B:b"))) - ab2) < 1e-14);
  CHECK_THROWS_AS(amalg_moment(s, c, parse_word("A:a C:c")), InvalidArgument);
  CHECK_THROWS_AS(amalg_moment(s, c, parse_word("A:z")), InvalidArgument);
}

TEST_CASE("free Haar unitaries: vanishing pattern") {
  const FdAlgebra c = FdAlgebra::scalars();
  const SourceSet s{std::make_shared<HaarUnitarySource>("U", "u"), std::make_shared<HaarUnitarySource>("V", "v")};
  const std::vector<std::pair<char, bool>> alphabet{{'u', false}, {'u', true}, {'v', false}, {'v', true}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<int> idx(static_cast<std::size_t>(len), 0);
    while (true) {
      NCWord w;
      std::vector<std::pair<char, bool>> letters;
      for (int i : idx) {
        const auto [ch, star] = alphabet[static_cast<std::size_t>(i)];
        letters.emplace_back(ch, star);
        w.items.emplace_back(Letter{ch == 'u' ? "U" : "V", std::string(1, ch), star});
      }
      const Complex want = reduces_to_identity(letters) ? 1.0 : 0.0;
      CHECK(std::abs(value(amalg_moment(s, c, w)) - want) < 1e-14);
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == 4) idx[p++] = 0;
      if (p == idx.size()) break;
    }
  }
}

TEST_CASE("Haar conjugation over D") {
  std::mt19937_64 g(5);
  const FdAlgebra a({Block{1, Rational(1, 4)}, Block{2, Rational(3, 4)}});
  const Representation r = make_representation(a, 14);
  const ComplexMatrix x = random_hermitian(r.total_dim(), g);
  const ComplexMatrix y = random_hermitian(r.total_dim(), g);
  const SourceSet s{std::make_shared<HaarUnitarySource>("U", "u"),
                    std::make_shared<ConstantMatrixSource>("C", r, std::map<std::string, ComplexMatrix>{{"x", x},
                                                                                                      {"y", y}})};
  const DElement ex = cond_expect(r, x);
  const DElement ey = cond_expect(r, y);
  CHECK((amalg_moment(s, a, parse_word("U:u C:x U:u*")) - ex).operator_norm() < 1e-12);
  // u x u* is free from y, so E(u x u* y) = E(x) E(y).
  CHECK((amalg_moment(s, a, parse_word("U:u C:x U:u* C:y")) - ex * ey).operator_norm() < 1e-12);
  CHECK(amalg_moment(s, a, parse_word("U:u C:x U:u C:y")).operator_norm() < 1e-14);
  CHECK((amalg_moment(s, a, parse_word("C:x C:y")) - cond_expect(r, x * y)).operator_norm() < 1e-12);
}

TEST_CASE("moment table consistency") {
  CHECK_THROWS_AS(MomentTableSource("A", {{"", scalar(2)}}), InvalidArgument);
  CHECK_THROWS_AS(MomentTableSource("A", {{"", scalar(1)}, {"a", scalar(1)}, {"a*", scalar(2)}}), InvalidArgument);
}

TEST_CASE("freeness check on exactly free families") {
  std::mt19937_64 g(9);
  const FdAlgebra a({Block{1, Rational(1, 2)}, Block{1, Rational(1, 2)}});
  const Representation r(a, {3, 3});
  // A single family is free from nothing; two fixed generic matrices are far from free.
  const ComplexMatrix x = random_hermitian(6, g);
  const FreenessVerdict alone = mg_free_check(r, {MatrixFamily{"X", {{"x", x}}}}, 3, 1e-9);
  CHECK(alone.pass);
  CHECK(alone.max_deviation < 1e-12);
  const ComplexMatrix y = random_hermitian(6, g);
  const FreenessVerdict pair =
      mg_free_check(r, {MatrixFamily{"X", {{"x", x}}}, MatrixFamily{"Y", {{"y", y}}}}, 3, 1e-9);
  CHECK(!pair.pass);
  CHECK(!pair.witness.empty());
  CHECK(pair.words_checked > 0);
  CHECK_THROWS_AS(mg_free_check(r, {MatrixFamily{"X", {{"x", x}}}, MatrixFamily{"Y", {{"y", y}}}}, 20, 0.1,
                                FreenessOptions{10}),
                  InvalidArgument);
}

TEST_CASE("microstate alphabet and reports") {
  std::mt19937_64 g(3);
  const ComplexMatrix h = random_hermitian(4, g);
  ComplexMatrix z = h;
  z(0, 1) += Complex(0, 1);
  const std::vector<std::pair<std::string, ComplexMatrix>> tuple{{"h", h}, {"z", z}};
  CHECK(microstate_alphabet(tuple) == std::vector<std::string>{"h", "z", "z*"});
  const auto words = words_up_to({"a", "b"}, 2);
  CHECK(words == std::vector<std::string>{"a", "b", "a a", "a b", "b a", "b b"});

  std::map<std::string, Complex> targets;
  for (const auto& w : words_up_to(microstate_alphabet(tuple), 2)) {
    std::istringstream in(w);
    std::string tok;
    ComplexMatrix p = ComplexMatrix::Identity(4, 4);
    while (in >> tok) p = p * (tok == "h" ? h : tok == "z" ? z : ComplexMatrix(z.adjoint()));
    targets[w] = p.trace() / 4.0;
  }
  const MicrostateReport exact = microstate_report(tuple, targets, 2, 1e-9, 1e9);
  CHECK(exact.ok);
  CHECK(exact.max_moment_deviation < 1e-12);
  targets["z* h"] += 0.5;
  const MicrostateReport off = microstate_report(tuple, targets, 2, 0.1, 1e9);
  CHECK(!off.ok);
  CHECK(off.worst_word == "z* h");
  targets.erase("h h");
  CHECK_THROWS_AS(microstate_report(tuple, targets, 2, 0.1, 1e9), InvalidArgument);
}

TEST_CASE("free product targets of a single family reproduce its traces") {
  std::mt19937_64 g(4);
  const FdAlgebra a({Block{1, Rational(1, 3)}, Block{1, Rational(2, 3)}});
  const Representation r(a, {2, 4});
  const ComplexMatrix x = random_hermitian(6, g);
  const ComplexMatrix y = random_hermitian(6, g);
  const auto t = free_product_targets(r, {MatrixFamily{"X", {{"x", x}, {"y", y}}}}, 3);
  CHECK(std::abs(t.at("x y x") - (x * y * x).trace() / 6.0) < 1e-12);
  CHECK_THROWS_AS(
      free_product_targets(r, {MatrixFamily{"X", {{"x", x}}}, MatrixFamily{"Y", {{"x", y}}}}, 2), InvalidArgument);
}

}  // TEST_SUITE
