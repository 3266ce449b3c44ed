#pragma once

#include "fdim/representation.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace freedim {

/// A letter of a noncommutative word: element `name` of source `source`,
/// optionally adjointed.
struct Letter {
  std::string source;
  std::string name;
  bool star = false;

  Letter adjoint() const { return {source, name, !star}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

using WordItem = std::variant<Letter, DElement>;

struct NCWord {
  std::vector<WordItem> items;

  std::size_t size() const noexcept { return items.size(); }
  /// Reverses the word and adjoints every item.
  NCWord adjoint() const;
  /// "src:name src:name* <d>" rendering.
  std::string to_string() const;
};

/// Builds a word of plain letters from tokens "src:name" or "src:name*".
NCWord parse_word(std::string_view text);

/// A family of noncommutative random variables together with its own
/// D-valued moments. Runs passed to `moment` hold only this source's letters
/// and elements of D.
class Source {
 public:
  explicit Source(std::string id) : id_(std::move(id)) {}
  virtual ~Source() = default;

  const std::string& id() const noexcept { return id_; }
  virtual bool has_letter(const std::string& name) const = 0;
  virtual DElement moment(std::span<const WordItem> run, const FdAlgebra& d) const = 0;

 private:
  std::string id_;
};

/// A Haar unitary commuting with D: E(u^j) = 0 for j != 0, E(1) = 1.
class HaarUnitarySource final : public Source {
 public:
  explicit HaarUnitarySource(std::string id, std::string letter = "u")
      : Source(std::move(id)), letter_(std::move(letter)) {}
  bool has_letter(const std::string& name) const override { return name == letter_; }
  DElement moment(std::span<const WordItem> run, const FdAlgebra& d) const override;

 private:
  std::string letter_;
};

/// Named n x n matrices; moments are E_k of the literal products.
class ConstantMatrixSource final : public Source {
 public:
  ConstantMatrixSource(std::string id, Representation rep, std::map<std::string, ComplexMatrix> matrices);
  bool has_letter(const std::string& name) const override { return matrices_.count(name) > 0; }
  DElement moment(std::span<const WordItem> run, const FdAlgebra& d) const override;
  const Representation& representation() const noexcept { return rep_; }

 private:
  Representation rep_;
  std::map<std::string, ComplexMatrix> matrices_;
};

/// Explicit table from words in this source's letters (keys "a b* c",
/// empty key for the unit) to D-valued moments. Adjoint words missing from
/// the table are filled in as E(w)^*. Elements of D inside a run must be
/// scalars.
class MomentTableSource final : public Source {
 public:
  MomentTableSource(std::string id, std::map<std::string, DElement> table);
  bool has_letter(const std::string& name) const override { return letters_.count(name) > 0; }
  DElement moment(std::span<const WordItem> run, const FdAlgebra& d) const override;

 private:
  std::map<std::string, DElement> table_;
  std::map<std::string, int> letters_;
};

using SourceSet = std::vector<std::shared_ptr<const Source>>;

struct MomentOptions {
  std::size_t max_letters = 12;
};

/// D-valued expectation of `w` assuming the sources are free with
/// amalgamation over D. Letters of one source are grouped into runs; with
/// runs X_1..X_r (r >= 2) and d_j = E(X_j), freeness gives
///   E(X_1 ... X_r) = -sum_{S != {}} (-1)^|S| E(prod_j (j in S ? d_j : X_j)),
/// each term having fewer runs. Subwords are memoised per call.
/// Throws InvalidArgument for unknown sources/letters, duplicate source ids,
/// or more than max_letters letters.
DElement amalg_moment(const SourceSet& sources, const FdAlgebra& d, const NCWord& w,
                      const MomentOptions& options = {});

/// A named set of matrices treated as one free family.
struct MatrixFamily {
  std::string name;
  std::vector<std::pair<std::string, ComplexMatrix>> elements;
};

struct FreenessVerdict {
  bool pass = true;
  double max_deviation = 0.0;
  std::string witness;  ///< "family.element family.element ..." of the worst word
  std::size_t words_checked = 0;
};

struct FreenessOptions {
  std::size_t max_words = 200000;
};

/// (m, gamma)-freeness over D: every alternating word of length 1..m has
/// ||E_k(b_1 ... b_q) - d|| < gamma, with d the free prediction from each
/// family's own moments. Words are visited by (length, family, element)
/// lexicographically; the first word attaining the maximum is the witness.
FreenessVerdict mg_free_check(const Representation& r, const std::vector<MatrixFamily>& families, int m,
                              double gamma, const FreenessOptions& options = {});

/// Letters of the microstate alphabet: every name, plus "name*" when the
/// matrix is not Hermitian to within 1e-12 of its largest entry.
std::vector<std::string> microstate_alphabet(const std::vector<std::pair<std::string, ComplexMatrix>>& tuple);

/// All words (keys "a b* c") of length 1..m over the alphabet, by length then
/// lexicographic letter index.
std::vector<std::string> words_up_to(const std::vector<std::string>& alphabet, int m);

struct MicrostateReport {
  bool ok = true;
  double max_moment_deviation = 0.0;
  double max_norm = 0.0;
  std::string worst_word;
};

/// Checks |tr_n(word) - target(word)| < gamma for every word of length <= m
/// and ||a_i|| <= norm_bound. Throws InvalidArgument on a missing target.
MicrostateReport microstate_report(const std::vector<std::pair<std::string, ComplexMatrix>>& tuple,
                                   const std::map<std::string, Complex>& targets, int m, double gamma,
                                   double norm_bound);

bool microstate_check(const Representation& r, const std::vector<std::pair<std::string, ComplexMatrix>>& tuple,
                      const std::map<std::string, Complex>& targets, int m, double gamma, double norm_bound);

/// Scalar targets tr_n(pi(E(w))) for the free product of `families` over D,
/// each family's marginals taken from its own matrices. Element names must be
/// unique across families.
std::map<std::string, Complex> free_product_targets(const Representation& r,
                                                    const std::vector<MatrixFamily>& families, int m);

}  // namespace freedim
