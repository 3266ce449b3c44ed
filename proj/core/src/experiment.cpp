#include "fdim/experiment.hpp"

#include "fdim/errors.hpp"
#include "fdim/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <regex>
#include <sstream>
#include <thread>

namespace freedim {

namespace {

constexpr double kResidualTolerance = 1e-8;
constexpr double kConjugationTolerance = 1e-12;

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int constant_index(const std::string& name) {
  static const std::regex re("B([1-9][0-9]*)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return 0;
  return std::stoi(m[1].str());
}

void check_sample(const Representation& r, const ComplexMatrix& v, const char* sampler) {
  const double u = unitarity_residual(v);
  const double c = commutation_residual(r, v);
  if (!(u <= kResidualTolerance) || !(c <= kResidualTolerance)) {
    throw NumericalError(std::string(sampler) + " sample residuals " + format17(u) + ", " + format17(c) +
                         " exceed " + format17(kResidualTolerance));
  }
}

ComplexMatrix sample(const std::string& sampler, const Representation& r, Rng& rng) {
  ComplexMatrix v = sampler == "polar" ? compressed_polar_unitary(r, rng) : haar_on_commutant(r, rng);
  check_sample(r, v, sampler.c_str());
  return v;
}

ComplexMatrix eval_pattern(const WordPattern& w, const std::vector<ComplexMatrix>& unitaries,
                           const std::vector<ComplexMatrix>& constants, std::int64_t n) {
  ComplexMatrix out = ComplexMatrix::Identity(n, n);
  for (const auto& seg : w.segments) {
    if (const auto* g = std::get_if<GroupWord>(&seg)) {
      const GroupWord widened(g->letters(), static_cast<int>(unitaries.size()));
      out = out * eval_group_word(widened, unitaries);
    } else {
      out = out * constants.at(static_cast<std::size_t>(std::get<int>(seg) - 1));
    }
  }
  return out;
}

void add_warning(ExperimentResult& res, const std::string& w) {
  if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) res.warnings.push_back(w);
}

Representation representation_for(const ExperimentConfig& cfg, std::int64_t k) {
  return make_representation(cfg.algebra, k);
}

std::vector<ComplexMatrix> constants_for(const ExperimentConfig& cfg, const Representation& r, int count,
                                         ExperimentResult& res) {
  bool centered = false;
  std::vector<ComplexMatrix> out = build_constants(cfg, r, count, centered);
  if (centered) add_warning(res, "explicit constants were not centered; centered automatically");
  for (std::size_t s = 0; s < out.size(); ++s) {
    if (operator_norm(out[s]) > cfg.norm_bound) {
      add_warning(res, "constant B" + std::to_string(s + 1) + " exceeds normBound at n=" +
                           std::to_string(r.total_dim()));
    }
  }
  return out;
}

KResult start_k(const Representation& r, std::int64_t k) {
  KResult kr;
  kr.k = k;
  kr.n = r.total_dim();
  kr.multiplicities = r.multiplicities();
  return kr;
}

void resize_series(Series& s, std::size_t trials) {
  s.values.assign(trials, 0.0);
  s.success.assign(trials, 0);
}

// ---------------------------------------------------------------------------
// JSON helpers

[[noreturn]] void schema(const std::string& pointer, const std::string& what) { throw SchemaError(pointer, what); }

double get_double(const Json& j, const std::string& pointer) {
  if (!j.is_number()) schema(pointer, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer()) schema(pointer, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const Json& j, const std::string& pointer) {
  if (!j.is_string()) schema(pointer, "expected a string");
  return j.get<std::string>();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Decay: return "decay";
    case ExperimentKind::Concentration: return "concentration";
    case ExperimentKind::AsFree: return "asfree";
    case ExperimentKind::PolarCompare: return "polar-compare";
  }
  return "decay";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::Decay, ExperimentKind::Concentration, ExperimentKind::AsFree,
                 ExperimentKind::PolarCompare}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

WordPattern parse_word_pattern(const std::string& text) {
  static const std::regex unitary("u([1-9][0-9]*)(\\*)?");
  static const std::regex constant("B([1-9][0-9]*)");
  WordPattern w;
  w.text = text;
  std::istringstream in(text);
  std::string tok;
  std::vector<int> run;
  bool last_constant = false;
  auto flush = [&] {
    if (run.empty()) return;
    int p = 0;
    for (int a : run) p = std::max(p, std::abs(a));
    w.segments.emplace_back(GroupWord(run, p));
    run.clear();
  };
  while (in >> tok) {
    std::smatch m;
    if (std::regex_match(tok, m, unitary)) {
      const int j = std::stoi(m[1].str());
      run.push_back(m[2].matched ? -j : j);
      w.generators = std::max(w.generators, j);
      last_constant = false;
    } else if (std::regex_match(tok, m, constant)) {
      if (last_constant) throw InvalidArgument("constant slots must be separated by unitaries in '" + text + "'");
      flush();
      const int s = std::stoi(m[1].str());
      w.segments.emplace_back(s);
      w.constants = std::max(w.constants, s);
      last_constant = true;
    } else {
      throw InvalidArgument("bad token '" + tok + "' in word pattern '" + text + "'");
    }
  }
  flush();
  if (w.segments.empty()) throw InvalidArgument("empty word pattern");
  return w;
}

std::vector<ComplexMatrix> build_constants(const ExperimentConfig& cfg, const Representation& r, int count,
                                           bool& centered) {
  const auto n = r.total_dim();
  std::vector<ComplexMatrix> raw;
  centered = false;
  if (cfg.constants.recipe == "shift-cos") {
    for (int s = 1; s <= count; ++s) {
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      for (std::int64_t j = 0; j < n; ++j) {
        a(j, (j + s) % n) += 0.5;
        a(j, ((j - s) % n + n) % n) += 0.5;
        a(j, j) += std::cos(2.0 * std::numbers::pi * s * static_cast<double>(j) / static_cast<double>(n) + s);
      }
      ComplexMatrix b = center_matrices(r, {a}).front();
      const double norm = operator_norm(b);
      if (!(norm > 1e-12)) throw InvalidArgument("shift-cos constant B" + std::to_string(s) + " centers to zero");
      raw.push_back(b / norm);
    }
    return raw;
  }
  if (cfg.constants.recipe != "explicit") throw InvalidArgument("unknown constants recipe '" + cfg.constants.recipe + "'");
  const auto at = cfg.constants.matrices.find(n);
  if (at == cfg.constants.matrices.end()) {
    throw InvalidArgument("no explicit constants for dimension " + std::to_string(n));
  }
  for (int s = 1; s <= count; ++s) {
    const auto it = at->second.find("B" + std::to_string(s));
    if (it == at->second.end()) throw InvalidArgument("missing explicit constant B" + std::to_string(s));
    if (it->second.rows() != n || it->second.cols() != n) throw ShapeMismatch("explicit constant has wrong shape");
    if (cond_expect(r, it->second).max_abs() > 1e-12) centered = true;
    raw.push_back(center_matrices(r, {it->second}).front());
  }
  return raw;
}

SeriesStats Series::stats() const {
  SeriesStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  s.max = -std::numeric_limits<double>::infinity();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    s.max = std::max(s.max, values[i]);
    ok += success[i] ? 1 : 0;
  }
  const double count = static_cast<double>(values.size());
  s.mean = sum / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_of_mean = std::sqrt(ss / (count - 1.0) / count);
  }
  s.success_fraction = static_cast<double>(ok) / count;
  return s;
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentResult run_decay_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  ExperimentResult res;
  res.config = cfg;
  res.seed = cfg.seed;
  res.primary = "norm";
  const WordPattern w = parse_word_pattern(cfg.word);
  if (w.generators == 0) throw InvalidArgument("the word pattern needs at least one unitary");
  const Rng master(cfg.seed);
  const std::string stream_id = to_string(cfg.kind);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  for (const auto k : cfg.k_grid) {
    const Representation r = representation_for(cfg, k);
    const auto constants = constants_for(cfg, r, w.constants, res);
    KResult kr = start_k(r, k);
    Series& norm = kr.series["norm"];
    resize_series(norm, trials);
    parallel_for(trials, options.threads, [&](std::size_t t) {
      Rng rng = master.stream(stream_id, static_cast<std::uint64_t>(k), t);
      std::vector<ComplexMatrix> us;
      for (int j = 0; j < w.generators; ++j) us.push_back(sample(cfg.sampler, r, rng));
      const double value = cond_expect(r, eval_pattern(w, us, constants, r.total_dim())).operator_norm();
      norm.values[t] = value;
      norm.success[t] = value < cfg.epsilon ? 1 : 0;
    });
    res.per_k.push_back(std::move(kr));
  }
  if (res.per_k.size() > 1) {
    bool ok = true;
    for (std::size_t i = 1; i < res.per_k.size(); ++i) {
      const SeriesStats a = res.per_k[i - 1].series.at("norm").stats();
      const SeriesStats b = res.per_k[i].series.at("norm").stats();
      const double se = std::sqrt(a.stderr_of_mean * a.stderr_of_mean + b.stderr_of_mean * b.stderr_of_mean);
      if (b.mean > a.mean + 2.0 * se) ok = false;
    }
    res.trend_ok = ok;
  }
  return res;
}

ExperimentResult run_asfree_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  ExperimentResult res;
  res.config = cfg;
  res.seed = cfg.seed;
  res.primary = "freeness";
  int count = 0;
  for (const auto& fam : cfg.families) {
    for (const auto& name : fam) count = std::max(count, constant_index(name));
  }
  const Rng master(cfg.seed);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto k : cfg.k_grid) {
    const Representation r = representation_for(cfg, k);
    const auto constants = constants_for(cfg, r, count, res);
    std::vector<MatrixFamily> families;
    for (std::size_t f = 0; f < cfg.families.size(); ++f) {
      MatrixFamily fam{"X" + std::to_string(f + 1), {}};
      for (const auto& name : cfg.families[f]) {
        fam.elements.emplace_back(name, constants.at(static_cast<std::size_t>(constant_index(name) - 1)));
      }
      families.push_back(std::move(fam));
    }
    const auto targets = free_product_targets(r, families, cfg.m);
    std::vector<std::map<std::string, Complex>> own_targets;
    for (const auto& fam : families) own_targets.push_back(free_product_targets(r, {fam}, cfg.m));

    KResult kr = start_k(r, k);
    Series& freeness = kr.series["freeness"];
    Series& micro = kr.series["microstate"];
    resize_series(freeness, trials);
    resize_series(micro, trials);
    parallel_for(trials, options.threads, [&](std::size_t t) {
      Rng rng = master.stream("asfree", static_cast<std::uint64_t>(k), t);
      std::vector<MatrixFamily> conjugated;
      std::vector<std::pair<std::string, ComplexMatrix>> tuple;
      for (std::size_t f = 0; f < families.size(); ++f) {
        const ComplexMatrix v = sample(cfg.sampler, r, rng);
        MatrixFamily c{families[f].name, {}};
        for (const auto& [name, b] : families[f].elements) {
          c.elements.emplace_back(name, v.adjoint() * b * v);
          tuple.emplace_back(name, c.elements.back().second);
        }
        const MicrostateReport own = microstate_report(c.elements, own_targets[f], cfg.m, inf, inf);
        if (!(own.max_moment_deviation <= kConjugationTolerance)) {
          throw NumericalError("conjugation changed the marginal moments of " + c.name + " by " +
                               format17(own.max_moment_deviation));
        }
        conjugated.push_back(std::move(c));
      }
      const FreenessVerdict verdict = mg_free_check(r, conjugated, cfg.m, cfg.gamma);
      freeness.values[t] = verdict.max_deviation;
      freeness.success[t] = verdict.pass ? 1 : 0;
      const MicrostateReport report = microstate_report(tuple, targets, cfg.m, cfg.gamma, cfg.norm_bound);
      micro.values[t] = report.max_moment_deviation;
      micro.success[t] = report.ok ? 1 : 0;
    });
    res.per_k.push_back(std::move(kr));
  }
  return res;
}

ExperimentResult run_polar_compare(const ExperimentConfig& cfg, const RunOptions& options) {
  ExperimentResult res;
  res.config = cfg;
  res.seed = cfg.seed;
  res.primary = "";
  std::vector<WordPattern> words;
  int count = 0;
  for (const auto& text : cfg.words) {
    words.push_back(parse_word_pattern(text));
    if (words.back().generators != 1) throw InvalidArgument("polar-compare words use the single unitary u1");
    count = std::max(count, words.back().constants);
  }
  const Rng master(cfg.seed);
  const auto trials = static_cast<std::size_t>(cfg.trials);
  for (const auto k : cfg.k_grid) {
    const Representation r = representation_for(cfg, k);
    const auto constants = constants_for(cfg, r, count, res);
    KResult kr = start_k(r, k);
    for (const char* sampler : {"haar", "polar"}) {
      for (const auto& w : words) {
        resize_series(kr.series[std::string(sampler) + ":" + w.text + ":re"], trials);
        resize_series(kr.series[std::string(sampler) + ":" + w.text + ":im"], trials);
      }
    }
    parallel_for(trials, options.threads, [&](std::size_t t) {
      for (const std::string sampler : {"haar", "polar"}) {
        Rng rng = master.stream("polar-compare/" + sampler, static_cast<std::uint64_t>(k), t);
        const ComplexMatrix v = sample(sampler, r, rng);
        for (const auto& w : words) {
          const Complex tr = normalized_trace(eval_pattern(w, {v}, constants, r.total_dim()));
          Series& re = kr.series.at(sampler + ":" + w.text + ":re");
          Series& im = kr.series.at(sampler + ":" + w.text + ":im");
          re.values[t] = tr.real();
          im.values[t] = tr.imag();
          re.success[t] = im.success[t] = 1;
        }
      }
    });
    for (const auto& w : words) {
      for (const std::string part : {"re", "im"}) {
        const SeriesStats h = kr.series.at("haar:" + w.text + ":" + part).stats();
        const SeriesStats p = kr.series.at("polar:" + w.text + ":" + part).stats();
        Comparison c;
        c.word = w.text;
        c.part = part;
        c.haar_mean = h.mean;
        c.polar_mean = p.mean;
        c.sigma = std::sqrt(h.stderr_of_mean * h.stderr_of_mean + p.stderr_of_mean * p.stderr_of_mean);
        const double diff = std::abs(h.mean - p.mean);
        c.agree = c.sigma > 0 ? diff <= 3.0 * c.sigma : diff <= 1e-12;
        kr.comparisons.push_back(c);
      }
    }
    res.per_k.push_back(std::move(kr));
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  switch (cfg.kind) {
    case ExperimentKind::Decay:
    case ExperimentKind::Concentration: return run_decay_experiment(cfg, options);
    case ExperimentKind::AsFree: return run_asfree_experiment(cfg, options);
    case ExperimentKind::PolarCompare: return run_polar_compare(cfg, options);
  }
  throw InvalidArgument("unknown experiment kind");
}

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  switch (kind) {
    case ExperimentKind::Decay: break;
    case ExperimentKind::Concentration:
      cfg.k_grid = {128};
      cfg.trials = 200;
      break;
    case ExperimentKind::AsFree:
      cfg.k_grid = {128};
      cfg.trials = 100;
      break;
    case ExperimentKind::PolarCompare:
      cfg.k_grid = {64};
      cfg.trials = 1000;
      break;
  }
  return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["kind"] = to_string(cfg.kind);
  j["algebra"] = algebra_to_json(cfg.algebra);
  j["kGrid"] = cfg.k_grid;
  j["word"] = cfg.word;
  j["words"] = cfg.words;
  j["families"] = cfg.families;
  Json constants{{"recipe", cfg.constants.recipe}};
  if (!cfg.constants.matrices.empty()) {
    Json mats = Json::object();
    for (const auto& [n, named] : cfg.constants.matrices) {
      Json entry = Json::object();
      for (const auto& [name, m] : named) entry[name] = matrix_to_json(m);
      mats[std::to_string(n)] = entry;
    }
    constants["matrices"] = mats;
  }
  j["constants"] = constants;
  j["epsilon"] = cfg.epsilon;
  j["trials"] = cfg.trials;
  j["normBound"] = cfg.norm_bound;
  j["m"] = cfg.m;
  j["gamma"] = cfg.gamma;
  j["sampler"] = cfg.sampler;
  j["seed"] = cfg.seed;
  return j;
}

ExperimentConfig config_from_json(const Json& j, std::optional<ExperimentKind> expected) {
  if (!j.is_object()) schema("", "config must be an object");
  ExperimentKind kind = expected.value_or(ExperimentKind::Decay);
  if (j.contains("kind")) {
    const std::string name = get_string(j["kind"], "/kind");
    try {
      kind = parse_experiment_kind(name);
    } catch (const InvalidArgument& e) {
      schema("/kind", e.what());
    }
    if (expected && *expected != kind) schema("/kind", "config is for '" + name + "', not '" + to_string(*expected) + "'");
  }
  ExperimentConfig cfg = default_config(kind);
  static const std::vector<std::string> known{"kind",  "algebra", "kGrid",     "word", "words", "families", "constants",
                                              "epsilon", "trials", "normBound", "m",    "gamma", "sampler",  "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) schema("/" + key, "unknown key");
  }
  if (j.contains("algebra")) cfg.algebra = algebra_from_json(j["algebra"], "/algebra");
  if (!cfg.algebra.purely_atomic()) schema("/algebra", "experiments need a purely atomic algebra");
  if (j.contains("kGrid")) {
    const Json& g = j["kGrid"];
    if (!g.is_array() || g.empty()) schema("/kGrid", "expected a non-empty array");
    cfg.k_grid.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string p = "/kGrid/" + std::to_string(i);
      cfg.k_grid.push_back(get_int(g[i], p));
      if (i > 0 && cfg.k_grid[i] <= cfg.k_grid[i - 1]) schema(p, "kGrid must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < cfg.k_grid.size(); ++i) {
    if (cfg.k_grid[i] < cfg.algebra.minimal_dim()) {
      schema("/kGrid/" + std::to_string(i), "below the minimal dimension " + std::to_string(cfg.algebra.minimal_dim()));
    }
  }
  if (j.contains("word")) cfg.word = get_string(j["word"], "/word");
  try {
    parse_word_pattern(cfg.word);
  } catch (const InvalidArgument& e) {
    schema("/word", e.what());
  }
  if (j.contains("words")) {
    const Json& ws = j["words"];
    if (!ws.is_array() || ws.empty()) schema("/words", "expected a non-empty array");
    cfg.words.clear();
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string p = "/words/" + std::to_string(i);
      cfg.words.push_back(get_string(ws[i], p));
      try {
        if (parse_word_pattern(cfg.words.back()).generators != 1) schema(p, "words must use only u1");
      } catch (const InvalidArgument& e) {
        schema(p, e.what());
      }
    }
  }
  if (j.contains("families")) {
    const Json& fs = j["families"];
    if (!fs.is_array() || fs.empty()) schema("/families", "expected a non-empty array");
    cfg.families.clear();
    for (std::size_t f = 0; f < fs.size(); ++f) {
      const std::string pf = "/families/" + std::to_string(f);
      if (!fs[f].is_array() || fs[f].empty()) schema(pf, "expected a non-empty array of constant names");
      std::vector<std::string> names;
      for (std::size_t e = 0; e < fs[f].size(); ++e) {
        const std::string pe = pf + "/" + std::to_string(e);
        names.push_back(get_string(fs[f][e], pe));
        if (constant_index(names.back()) == 0) schema(pe, "expected a constant name B<s>");
        for (const auto& prev : cfg.families) {
          if (std::find(prev.begin(), prev.end(), names.back()) != prev.end()) schema(pe, "constant used twice");
        }
        if (std::count(names.begin(), names.end(), names.back()) > 1) schema(pe, "constant used twice");
      }
      cfg.families.push_back(std::move(names));
    }
  }
  if (j.contains("constants")) {
    const Json& c = j["constants"];
    if (!c.is_object()) schema("/constants", "expected an object");
    for (const auto& [key, value] : c.items()) {
      if (key != "recipe" && key != "matrices") schema("/constants/" + key, "unknown key");
    }
    if (c.contains("recipe")) cfg.constants.recipe = get_string(c["recipe"], "/constants/recipe");
    if (cfg.constants.recipe != "shift-cos" && cfg.constants.recipe != "explicit") {
      schema("/constants/recipe", "expected 'shift-cos' or 'explicit'");
    }
    if (c.contains("matrices")) {
      const Json& mats = c["matrices"];
      if (!mats.is_object()) schema("/constants/matrices", "expected an object keyed by dimension");
      for (const auto& [nkey, named] : mats.items()) {
        const std::string pn = "/constants/matrices/" + nkey;
        std::int64_t n = 0;
        try {
          std::size_t used = 0;
          n = std::stoll(nkey, &used);
          if (used != nkey.size() || n < 1) throw std::invalid_argument(nkey);
        } catch (const std::exception&) {
          schema(pn, "keys must be positive dimensions");
        }
        if (!named.is_object()) schema(pn, "expected an object of named matrices");
        for (const auto& [name, m] : named.items()) {
          if (constant_index(name) == 0) schema(pn + "/" + name, "expected a constant name B<s>");
          ComplexMatrix mat = matrix_from_json(m, pn + "/" + name);
          if (mat.rows() != n) schema(pn + "/" + name, "matrix size does not match its key");
          cfg.constants.matrices[n][name] = std::move(mat);
        }
      }
    }
    if (cfg.constants.recipe == "explicit" && cfg.constants.matrices.empty()) {
      schema("/constants/matrices", "the explicit recipe needs matrices");
    }
  }
  if (j.contains("epsilon")) cfg.epsilon = get_double(j["epsilon"], "/epsilon");
  if (!(cfg.epsilon > 0)) schema("/epsilon", "epsilon must be positive");
  if (j.contains("trials")) {
    const auto t = get_int(j["trials"], "/trials");
    if (t < 1 || t > 100000000) schema("/trials", "trials must be >= 1");
    cfg.trials = static_cast<int>(t);
  }
  if (j.contains("normBound")) cfg.norm_bound = get_double(j["normBound"], "/normBound");
  if (!(cfg.norm_bound > 0)) schema("/normBound", "normBound must be positive");
  if (j.contains("m")) {
    const auto m = get_int(j["m"], "/m");
    if (m < 1 || m > 12) schema("/m", "m must be in 1..12");
    cfg.m = static_cast<int>(m);
  }
  if (j.contains("gamma")) cfg.gamma = get_double(j["gamma"], "/gamma");
  if (!(cfg.gamma > 0)) schema("/gamma", "gamma must be positive");
  if (j.contains("sampler")) cfg.sampler = get_string(j["sampler"], "/sampler");
  if (cfg.sampler != "haar" && cfg.sampler != "polar") schema("/sampler", "expected 'haar' or 'polar'");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
      schema("/seed", "expected a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Output

Json result_to_json(const ExperimentResult& result) {
  Json j;
  j["kind"] = to_string(result.config.kind);
  j["seed"] = result.seed;
  j["primarySeries"] = result.primary;
  j["config"] = config_to_json(result.config);
  Json per_k = Json::array();
  for (const auto& kr : result.per_k) {
    Json e;
    e["k"] = kr.k;
    e["n"] = kr.n;
    e["multiplicities"] = kr.multiplicities;
    Json series = Json::object();
    for (const auto& [name, s] : kr.series) {
      const SeriesStats st = s.stats();
      series[name] = {{"mean", st.mean},
                      {"max", st.max},
                      {"stderr", st.stderr_of_mean},
                      {"successFraction", st.success_fraction},
                      {"trials", st.trials}};
    }
    e["series"] = series;
    if (!kr.comparisons.empty()) {
      Json cs = Json::array();
      for (const auto& c : kr.comparisons) {
        cs.push_back({{"word", c.word},
                      {"part", c.part},
                      {"haarMean", c.haar_mean},
                      {"polarMean", c.polar_mean},
                      {"sigma", c.sigma},
                      {"agree", c.agree}});
      }
      e["comparisons"] = cs;
    }
    per_k.push_back(e);
  }
  j["perK"] = per_k;
  j["warnings"] = result.warnings;
  if (result.trend_ok) j["trendOk"] = *result.trend_ok;
  return j;
}

std::string result_to_csv(const ExperimentResult& result) {
  std::string out = "k,n,trial,series,statistic\n";
  for (const auto& kr : result.per_k) {
    for (const auto& [name, s] : kr.series) {
      for (std::size_t t = 0; t < s.values.size(); ++t) {
        out += std::to_string(kr.k) + "," + std::to_string(kr.n) + "," + std::to_string(t) + "," + name + "," +
               format17(s.values[t]) + "\n";
      }
    }
  }
  return out;
}

}  // namespace freedim
