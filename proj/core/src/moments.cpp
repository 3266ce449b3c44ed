#include "fdim/moments.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace freedim {

namespace {

std::string letter_key(const std::string& name, bool star) { return star ? name + "*" : name; }

bool is_scalar(const DElement& d, Complex& value) {
  bool have = false;
  for (const auto& b : d.blocks()) {
    if (b.rows() == 0) continue;
    const Complex c = b(0, 0);
    if (!b.isApprox(c * ComplexMatrix::Identity(b.rows(), b.cols()), 0.0) &&
        (b - c * ComplexMatrix::Identity(b.rows(), b.cols())).cwiseAbs().maxCoeff() != 0.0) {
      return false;
    }
    if (have && c != value) return false;
    value = c;
    have = true;
  }
  if (!have) value = 1.0;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// NCWord

NCWord NCWord::adjoint() const {
  NCWord out;
  out.items.reserve(items.size());
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (const auto* l = std::get_if<Letter>(&*it)) {
      out.items.emplace_back(l->adjoint());
    } else {
      out.items.emplace_back(std::get<DElement>(*it).adjoint());
    }
  }
  return out;
}

std::string NCWord::to_string() const {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ' ';
    if (const auto* l = std::get_if<Letter>(&item)) {
      out += l->source + ":" + letter_key(l->name, l->star);
    } else {
      out += "<d>";
    }
  }
  return out;
}

NCWord parse_word(std::string_view text) {
  NCWord w;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
      throw InvalidArgument("word token '" + token + "' is not of the form source:name");
    }
    Letter l{token.substr(0, colon), token.substr(colon + 1), false};
    if (l.name.back() == '*') {
      l.name.pop_back();
      l.star = true;
    }
    w.items.emplace_back(std::move(l));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Sources

DElement HaarUnitarySource::moment(std::span<const WordItem> run, const FdAlgebra& d) const {
  // u commutes with D, so the run equals (product of its D items) u^net.
  DElement coefficient = DElement::identity(d);
  long net = 0;
  for (const auto& item : run) {
    if (const auto* l = std::get_if<Letter>(&item)) {
      if (l->name != letter_) throw InvalidArgument("source '" + id() + "' has no letter '" + l->name + "'");
      net += l->star ? -1 : 1;
    } else {
      coefficient = coefficient * std::get<DElement>(item);
    }
  }
  return net == 0 ? coefficient : DElement::zero(d);
}

ConstantMatrixSource::ConstantMatrixSource(std::string id, Representation rep,
                                           std::map<std::string, ComplexMatrix> matrices)
    : Source(std::move(id)), rep_(std::move(rep)), matrices_(std::move(matrices)) {
  for (const auto& [name, m] : matrices_) {
    if (m.rows() != rep_.total_dim() || m.cols() != rep_.total_dim()) {
      throw ShapeMismatch("matrix '" + name + "' does not match the representation dimension");
    }
  }
}

DElement ConstantMatrixSource::moment(std::span<const WordItem> run, const FdAlgebra& d) const {
  if (d != rep_.algebra()) throw ShapeMismatch("source '" + id() + "' is represented over a different algebra");
  const auto n = rep_.total_dim();
  ComplexMatrix product = ComplexMatrix::Identity(n, n);
  bool first = true;
  for (const auto& item : run) {
    ComplexMatrix factor;
    if (const auto* l = std::get_if<Letter>(&item)) {
      const auto it = matrices_.find(l->name);
      if (it == matrices_.end()) throw InvalidArgument("source '" + id() + "' has no letter '" + l->name + "'");
      factor = l->star ? ComplexMatrix(it->second.adjoint()) : it->second;
    } else {
      factor = embed(rep_, std::get<DElement>(item));
    }
    product = first ? factor : ComplexMatrix(product * factor);
    first = false;
  }
  return cond_expect(rep_, product);
}

MomentTableSource::MomentTableSource(std::string id, std::map<std::string, DElement> table)
    : Source(std::move(id)), table_(std::move(table)) {
  auto split = [](const std::string& key) {
    std::vector<std::pair<std::string, bool>> out;
    std::istringstream in(key);
    std::string tok;
    while (in >> tok) {
      const bool star = tok.back() == '*';
      if (star) tok.pop_back();
      out.emplace_back(tok, star);
    }
    return out;
  };
  auto adjoint_key = [&](const std::string& key) {
    auto letters = split(key);
    std::string out;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      if (!out.empty()) out += ' ';
      out += letter_key(it->first, !it->second);
    }
    return out;
  };
  std::map<std::string, DElement> extra;
  for (const auto& [key, value] : table_) {
    for (const auto& [name, star] : split(key)) letters_[name] = 1;
    const std::string adj = adjoint_key(key);
    const auto it = table_.find(adj);
    if (it == table_.end()) {
      extra.emplace(adj, value.adjoint());
    } else if ((it->second - value.adjoint()).max_abs() != 0.0) {
      throw InvalidArgument("moment table of '" + this->id() + "' is not *-consistent at '" + key + "'");
    }
  }
  table_.merge(extra);
  if (const auto it = table_.find(""); it != table_.end()) {
    Complex unit;
    if (!is_scalar(it->second, unit) || unit != Complex(1.0)) {
      throw InvalidArgument("moment table of '" + this->id() + "' is not unital");
    }
  }
}

DElement MomentTableSource::moment(std::span<const WordItem> run, const FdAlgebra& d) const {
  Complex scalar = 1.0;
  std::string key;
  for (const auto& item : run) {
    if (const auto* l = std::get_if<Letter>(&item)) {
      if (!has_letter(l->name)) throw InvalidArgument("source '" + id() + "' has no letter '" + l->name + "'");
      if (!key.empty()) key += ' ';
      key += letter_key(l->name, l->star);
    } else {
      Complex c;
      if (!is_scalar(std::get<DElement>(item), c)) {
        throw UnsupportedOperand("moment table source '" + id() + "' cannot absorb a non-scalar element of D");
      }
      scalar *= c;
    }
  }
  if (key.empty()) return scalar * DElement::identity(d);
  const auto it = table_.find(key);
  if (it == table_.end()) throw InvalidArgument("moment table of '" + id() + "' has no entry for '" + key + "'");
  it->second.check_shape(d);
  return scalar * it->second;
}

// ---------------------------------------------------------------------------
// amalg_moment

namespace {

struct Run {
  const Source* source = nullptr;
  std::vector<WordItem> items;
};

class MomentEvaluator {
 public:
  MomentEvaluator(const SourceSet& sources, const FdAlgebra& d) : d_(d) {
    for (const auto& s : sources) {
      if (!s) throw InvalidArgument("null source");
      if (!by_id_.emplace(s->id(), s.get()).second) throw InvalidArgument("duplicate source id '" + s->id() + "'");
    }
  }

  const Source& resolve(const Letter& l) const {
    const auto it = by_id_.find(l.source);
    if (it == by_id_.end()) throw InvalidArgument("unresolved source '" + l.source + "'");
    if (!it->second->has_letter(l.name)) {
      throw InvalidArgument("unresolved letter '" + l.name + "' in source '" + l.source + "'");
    }
    return *it->second;
  }

  DElement evaluate(const std::vector<WordItem>& word) {
    const std::string k = key(word);
    if (const auto it = memo_.find(k); it != memo_.end()) return it->second;
    DElement value = compute(word);
    memo_.emplace(k, value);
    return value;
  }

 private:
  static void append_bytes(std::string& out, const DElement& d) {
    out += '#';
    for (const auto& b : d.blocks()) {
      const auto bytes = static_cast<std::size_t>(b.size()) * sizeof(Complex);
      const auto offset = out.size();
      out.resize(offset + bytes);
      std::memcpy(out.data() + offset, b.data(), bytes);
      out += '|';
    }
  }

  static std::string key(const std::vector<WordItem>& word) {
    std::string out;
    for (const auto& item : word) {
      if (const auto* l = std::get_if<Letter>(&item)) {
        out += l->source;
        out += ':';
        out += l->name;
        out += l->star ? "*;" : ";";
      } else {
        append_bytes(out, std::get<DElement>(item));
      }
    }
    return out;
  }

  DElement compute(const std::vector<WordItem>& word) {
    std::size_t first = 0;
    std::size_t last = word.size();
    DElement left = DElement::identity(d_);
    DElement right = DElement::identity(d_);
    while (first < last && std::holds_alternative<DElement>(word[first])) {
      left = left * std::get<DElement>(word[first]);
      ++first;
    }
    while (last > first && std::holds_alternative<DElement>(word[last - 1])) {
      right = std::get<DElement>(word[last - 1]) * right;
      --last;
    }
    if (first == last) return left * right;

    // Split into maximal single-source runs; D items between runs of
    // different sources are attached to the run on their left.
    std::vector<Run> runs;
    for (std::size_t i = first; i < last; ++i) {
      if (const auto* l = std::get_if<Letter>(&word[i])) {
        const Source* src = &resolve(*l);
        if (runs.empty() || runs.back().source != src) runs.push_back(Run{src, {}});
        runs.back().items.push_back(word[i]);
      } else {
        runs.back().items.push_back(word[i]);
      }
    }
    // Trailing D items inside a run that is followed by a run of the same
    // source cannot occur; runs alternate by construction.
    if (runs.size() == 1) return left * runs[0].source->moment(runs[0].items, d_) * right;

    const std::size_t r = runs.size();
    std::vector<DElement> centers;
    centers.reserve(r);
    std::vector<std::size_t> live;
    for (std::size_t j = 0; j < r; ++j) {
      centers.push_back(runs[j].source->moment(runs[j].items, d_));
      if (!centers.back().is_exact_zero()) live.push_back(j);
    }
    DElement total = DElement::zero(d_);
    // Subsets containing an index with d_j == 0 contribute zero.
    const std::size_t subsets = std::size_t{1} << live.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<bool> replaced(r, false);
      int count = 0;
      for (std::size_t b = 0; b < live.size(); ++b) {
        if (mask & (std::size_t{1} << b)) {
          replaced[live[b]] = true;
          ++count;
        }
      }
      std::vector<WordItem> sub;
      for (std::size_t j = 0; j < r; ++j) {
        if (replaced[j]) {
          sub.emplace_back(centers[j]);
        } else {
          sub.insert(sub.end(), runs[j].items.begin(), runs[j].items.end());
        }
      }
      const DElement term = evaluate(sub);
      // -(-1)^|S|: odd subsets add, even subsets subtract.
      if (count % 2 == 1) {
        total += term;
      } else {
        total -= term;
      }
    }
    return left * total * right;
  }

  const FdAlgebra& d_;
  std::map<std::string, const Source*> by_id_;
  std::unordered_map<std::string, DElement> memo_;
};

}  // namespace

DElement amalg_moment(const SourceSet& sources, const FdAlgebra& d, const NCWord& w, const MomentOptions& options) {
  std::size_t letters = 0;
  for (const auto& item : w.items) {
    if (std::holds_alternative<Letter>(item)) {
      ++letters;
    } else {
      std::get<DElement>(item).check_shape(d);
    }
  }
  if (letters > options.max_letters) {
    throw InvalidArgument("word has " + std::to_string(letters) + " letters, limit is " +
                          std::to_string(options.max_letters));
  }
  MomentEvaluator eval(sources, d);
  for (const auto& item : w.items) {
    if (const auto* l = std::get_if<Letter>(&item)) eval.resolve(*l);
  }
  return eval.evaluate(w.items);
}

// ---------------------------------------------------------------------------
// (m, gamma)-freeness

FreenessVerdict mg_free_check(const Representation& r, const std::vector<MatrixFamily>& families, int m,
                              double gamma, const FreenessOptions& options) {
  if (families.empty()) throw InvalidArgument("at least one family is required");
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (!(gamma > 0)) throw InvalidArgument("gamma must be positive");
  const auto n = r.total_dim();
  SourceSet sources;
  std::vector<std::string> names;
  for (const auto& fam : families) {
    if (fam.elements.empty()) throw InvalidArgument("family '" + fam.name + "' is empty");
    std::map<std::string, ComplexMatrix> mats;
    for (const auto& [name, mat] : fam.elements) {
      if (mat.rows() != n || mat.cols() != n) {
        throw ShapeMismatch("element '" + fam.name + "." + name + "' does not match dimension " + std::to_string(n));
      }
      if (!mats.emplace(name, mat).second) throw InvalidArgument("duplicate element '" + fam.name + "." + name + "'");
    }
    sources.push_back(std::make_shared<ConstantMatrixSource>(fam.name, r, std::move(mats)));
  }

  // Count alternating words up front to enforce the cap.
  const std::size_t F = families.size();
  std::vector<std::size_t> sizes(F);
  std::size_t total_elements = 0;
  for (std::size_t f = 0; f < F; ++f) total_elements += sizes[f] = families[f].elements.size();
  {
    // ways[f] = number of alternating words of the current length ending in family f
    std::vector<long double> ways(F);
    long double count = 0;
    for (std::size_t f = 0; f < F; ++f) count += ways[f] = static_cast<long double>(sizes[f]);
    for (int q = 2; q <= m; ++q) {
      long double sum = 0;
      for (std::size_t f = 0; f < F; ++f) sum += ways[f];
      for (std::size_t f = 0; f < F; ++f) ways[f] = (sum - ways[f]) * static_cast<long double>(sizes[f]);
      for (std::size_t f = 0; f < F; ++f) count += ways[f];
    }
    if (count > static_cast<long double>(options.max_words)) {
      throw InvalidArgument("alternating word count exceeds the configured cap of " +
                            std::to_string(options.max_words));
    }
  }
  (void)total_elements;

  FreenessVerdict verdict;
  std::vector<std::pair<std::size_t, std::size_t>> word;
  std::vector<ComplexMatrix> prefix;  // prefix[i] = product of the first i+1 letters

  std::function<void(int)> visit = [&](int length) {
    if (static_cast<int>(word.size()) == length) {
      NCWord w;
      std::string label;
      for (const auto& [f, e] : word) {
        w.items.emplace_back(Letter{families[f].name, families[f].elements[e].first, false});
        if (!label.empty()) label += ' ';
        label += families[f].name + "." + families[f].elements[e].first;
      }
      const DElement actual = cond_expect(r, prefix.back());
      const DElement predicted = amalg_moment(sources, r.algebra(), w);
      const double dev = (actual - predicted).operator_norm();
      ++verdict.words_checked;
      if (dev > verdict.max_deviation || verdict.witness.empty()) {
        if (dev > verdict.max_deviation || verdict.words_checked == 1) {
          verdict.max_deviation = dev;
          verdict.witness = label;
        }
      }
      return;
    }
    for (std::size_t f = 0; f < F; ++f) {
      if (!word.empty() && word.back().first == f) continue;
      for (std::size_t e = 0; e < sizes[f]; ++e) {
        const ComplexMatrix& mat = families[f].elements[e].second;
        word.emplace_back(f, e);
        prefix.push_back(prefix.empty() ? mat : ComplexMatrix(prefix.back() * mat));
        visit(length);
        prefix.pop_back();
        word.pop_back();
      }
    }
  };
  for (int q = 1; q <= m; ++q) visit(q);
  verdict.pass = verdict.max_deviation < gamma;
  return verdict;
}

// ---------------------------------------------------------------------------
// Microstates

namespace {

bool needs_star(const ComplexMatrix& mat) {
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale;
}

}  // namespace

std::vector<std::string> microstate_alphabet(const std::vector<std::pair<std::string, ComplexMatrix>>& tuple) {
  std::vector<std::string> out;
  for (const auto& [name, mat] : tuple) {
    out.push_back(name);
    if (needs_star(mat)) out.push_back(name + "*");
  }
  return out;
}

std::vector<std::string> words_up_to(const std::vector<std::string>& alphabet, int m) {
  std::vector<std::string> out;
  std::vector<std::string> current{""};
  for (int q = 1; q <= m; ++q) {
    std::vector<std::string> next;
    next.reserve(current.size() * alphabet.size());
    for (const auto& prefix : current) {
      for (const auto& a : alphabet) next.push_back(prefix.empty() ? a : prefix + " " + a);
    }
    out.insert(out.end(), next.begin(), next.end());
    current = std::move(next);
  }
  return out;
}

MicrostateReport microstate_report(const std::vector<std::pair<std::string, ComplexMatrix>>& tuple,
                                   const std::map<std::string, Complex>& targets, int m, double gamma,
                                   double norm_bound) {
  if (tuple.empty()) throw InvalidArgument("empty tuple");
  MicrostateReport report;
  const auto n = tuple.front().second.rows();
  for (const auto& [name, mat] : tuple) {
    if (mat.rows() != n || mat.cols() != n) throw ShapeMismatch("tuple element '" + name + "' has wrong shape");
    const double norm = operator_norm(mat);
    report.max_norm = std::max(report.max_norm, norm);
    if (norm > norm_bound) report.ok = false;
  }
  const std::vector<std::string> alphabet = microstate_alphabet(tuple);
  std::vector<ComplexMatrix> letters;
  for (const auto& [name, mat] : tuple) {
    letters.push_back(mat);
    if (needs_star(mat)) letters.push_back(mat.adjoint());
  }
  const double dn = static_cast<double>(n);

  auto check = [&](const std::string& word, Complex value) {
    const auto it = targets.find(word);
    if (it == targets.end()) throw InvalidArgument("missing target for word '" + word + "'");
    const double dev = std::abs(value - it->second);
    if (dev > report.max_moment_deviation || report.worst_word.empty()) {
      if (dev >= report.max_moment_deviation) {
        report.max_moment_deviation = dev;
        report.worst_word = word;
      }
    }
    if (!(dev < gamma)) report.ok = false;
  };

  // Depth-first over words; the last letter is folded in with an O(n^2)
  // trace of a product instead of a full multiplication.
  std::function<void(const ComplexMatrix*, const std::string&, int)> visit =
      [&](const ComplexMatrix* prefix, const std::string& label, int depth) {
        for (std::size_t a = 0; a < alphabet.size(); ++a) {
          const std::string word = label.empty() ? alphabet[a] : label + " " + alphabet[a];
          const Complex tr = prefix == nullptr
                                 ? letters[a].trace() / dn
                                 : prefix->cwiseProduct(letters[a].transpose()).sum() / dn;
          check(word, tr);
          if (depth + 1 < m) {
            const ComplexMatrix next = prefix == nullptr ? letters[a] : ComplexMatrix(*prefix * letters[a]);
            visit(&next, word, depth + 1);
          }
        }
      };
  visit(nullptr, "", 0);
  return report;
}

bool microstate_check(const Representation& r, const std::vector<std::pair<std::string, ComplexMatrix>>& tuple,
                      const std::map<std::string, Complex>& targets, int m, double gamma, double norm_bound) {
  for (const auto& [name, mat] : tuple) {
    if (mat.rows() != r.total_dim() || mat.cols() != r.total_dim()) {
      throw ShapeMismatch("tuple element '" + name + "' does not match the representation");
    }
  }
  return microstate_report(tuple, targets, m, gamma, norm_bound).ok;
}

std::map<std::string, Complex> free_product_targets(const Representation& r,
                                                    const std::vector<MatrixFamily>& families, int m) {
  SourceSet sources;
  std::map<std::string, std::string> family_of;
  std::vector<std::pair<std::string, ComplexMatrix>> tuple;
  for (const auto& fam : families) {
    std::map<std::string, ComplexMatrix> mats;
    for (const auto& [name, mat] : fam.elements) {
      if (!family_of.emplace(name, fam.name).second) {
        throw InvalidArgument("element name '" + name + "' is used by more than one family");
      }
      mats.emplace(name, mat);
      tuple.emplace_back(name, mat);
    }
    sources.push_back(std::make_shared<ConstantMatrixSource>(fam.name, r, std::move(mats)));
  }
  std::map<std::string, Complex> targets;
  for (const std::string& key : words_up_to(microstate_alphabet(tuple), m)) {
    NCWord w;
    std::istringstream in(key);
    std::string tok;
    while (in >> tok) {
      const bool star = tok.back() == '*';
      if (star) tok.pop_back();
      w.items.emplace_back(Letter{family_of.at(tok), tok, star});
    }
    targets.emplace(key, r.trace(amalg_moment(sources, r.algebra(), w)));
  }
  return targets;
}

}  // namespace freedim
