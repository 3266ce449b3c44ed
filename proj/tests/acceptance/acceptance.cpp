// Acceptance run: one line per criterion, nonzero exit if any fails.

#include "class_a.hpp"

#include <fdim_cli/cli.hpp>
#include <fdim/construct.hpp>
#include <fdim/dim_calculus.hpp>
#include <fdim/experiment.hpp>
#include <fdim/moments.hpp>
#include <fdim/sampling.hpp>
#include <fdim/serialization.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace freedim;

namespace {

// Tolerances and budgets.
constexpr double kBsTol = 1e-6;
constexpr double kCondExpectTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kSigmas = 3.0;
constexpr double kExactZero = 1e-12;
constexpr double kDecayRatio = 0.5;
constexpr double kConcentrationMin = 0.95;
constexpr double kFreenessMin = 0.9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d [%s] %s: %s; %.2f s of %.0f s budget%s\n", id, pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.c_str(), secs, budget_s, in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Rational q(const char* s) { return parse_rational(s); }

Outcome group_calculus() {
  Outcome o;
  int checked = 0;
  auto expect = [&](const Rational& got, const Rational& want, const std::string& what) {
    ++checked;
    if (got != want) {
      o.pass = false;
      o.detail += what + " gave " + to_string(got) + "; ";
    }
  };
  for (int n = 2; n <= 12; ++n) {
    expect(delta0_group(*make_amenable(Integer(n))).value, 1 - make_rational(1, n), "Z/" + std::to_string(n));
  }
  for (int n = 1; n <= 6; ++n) expect(delta0_group(*make_free_group(n)).value, n, "F" + std::to_string(n));
  for (int g = 2; g <= 4; ++g) {
    expect(delta0_group(*make_surface(g)).value, 2 * g - 1, "surface " + std::to_string(g));
  }
  // Hand value for the free product: b1 = 1 - 1/2 - 1/3.
  expect(betti(*parse_group_expr("(amalgam (cyclic 2) (cyclic 3) over trivial)")).beta1, q("1/6"), "Z/2*Z/3 b1");
  o.detail = std::to_string(checked) + " exact values checked" + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome class_a_consistency() {
  testing::ClassAGenerator gen(20261018);
  int mismatches = 0;
  std::string first;
  for (int i = 0; i < 500; ++i) {
    const GroupPtr g = gen(5);
    if (delta0_group(*g).value != delta_star(*g)) {
      if (first.empty()) first = print(*g);
      ++mismatches;
    }
  }
  return {mismatches == 0, "500 expressions, " + std::to_string(mismatches) + " mismatches" +
                               (first.empty() ? "" : ", first " + first)};
}

Outcome bs_pipeline(const char* s_text) {
  const Rational s = q(s_text);
  const BsConstruction c = construct_bs(s, kBsTol);
  const TensorSequenceEnclosure enc = delta0_tensor_sequence(bs_factor_sequence(c), {kBsTol, c.terms.size() + 1});
  const bool seq_ok = enc.delta0.width() <= kBsTol && enc.delta0.contains(2 - s);
  const auto dir = std::filesystem::temp_directory_path() / "fdim_acceptance_bs";
  std::filesystem::create_directories(dir);
  save_json_file(dir / "bs.json", bs_to_json(c));
  VnOptions vo;
  vo.base_dir = dir;
  vo.tol = kBsTol;
  const DimResult r = delta0_vn(*parse_vn_expr("(amalgam-vn (diffuse) (diffuse) over (hyperfinite bs.json))"), vo);
  const Interval iv = std::holds_alternative<Interval>(r.value) ? std::get<Interval>(r.value)
                                                                : Interval::point(std::get<Rational>(r.value));
  const double sd = to_double(s);
  const bool amalg_ok = iv.lo >= sd - kBsTol && iv.hi <= sd + kBsTol && iv.contains(s);
  return {seq_ok && amalg_ok, std::string("s=") + s_text + ", " + std::to_string(c.terms.size()) +
                                  " terms, delta0(B_s) in [" + format_decimal(enc.delta0.lo) + ", " +
                                  format_decimal(enc.delta0.hi) + "], amalgam in [" + format_decimal(iv.lo) + ", " +
                                  format_decimal(iv.hi) + "]"};
}

Outcome corner_formula() {
  Outcome o;
  for (int t : {2, 3, 5}) {
    const FtConstruction c = construct_ft(t);
    const bool exact = std::holds_alternative<Rational>(c.dim.value) && std::get<Rational>(c.dim.value) == t;
    o.pass = o.pass && exact;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += "t=" + std::to_string(t) + " phi=" + to_string(c.phi) + " s=" + to_string(c.s) + " -> " +
                to_string(c.dim.value);
  }
  return o;
}

ComplexMatrix gaussian(std::int64_t r, std::int64_t c, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  ComplexMatrix x(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) x(i, j) = Complex(nd(g), nd(g));
  return x;
}

Outcome cond_expect_residuals() {
  std::mt19937_64 g(5);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int blocks = std::uniform_int_distribution<int>(1, 4)(g);
    std::vector<std::int64_t> raw;
    std::int64_t total = 0;
    for (int l = 0; l < blocks; ++l) total += raw.emplace_back(std::uniform_int_distribution<std::int64_t>(1, 9)(g));
    std::vector<Block> bl;
    for (int l = 0; l < blocks; ++l) {
      bl.push_back(Block{std::uniform_int_distribution<std::int64_t>(1, 3)(g), make_rational(raw[l], total)});
    }
    const FdAlgebra a(bl);
    const std::int64_t target = std::uniform_int_distribution<std::int64_t>(a.minimal_dim(), 64)(g);
    const Representation r = make_representation(a, target);
    const ComplexMatrix x = gaussian(r.total_dim(), r.total_dim(), g);
    std::vector<ComplexMatrix> d1, d2;
    for (const Block& b : a.blocks()) {
      d1.push_back(gaussian(b.dim, b.dim, g));
      d2.push_back(gaussian(b.dim, b.dim, g));
    }
    const DElement e1(d1), e2(d2);
    const DElement ex = cond_expect(r, x);
    worst = std::max(worst, std::abs(normalized_trace(x) - r.trace(ex)));
    worst = std::max(worst, (cond_expect(r, embed(r, ex)) - ex).operator_norm());
    worst = std::max(worst, (cond_expect(r, embed(r, e1) * x * embed(r, e2)) - e1 * ex * e2).operator_norm());
  }
  return {worst <= kCondExpectTol, "100 triples, max residual " + fmt("%.3g", worst)};
}

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderr_of_mean() const {
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
  /// |mean - want| within kSigmas standard errors (or exactly zero spread).
  bool agrees(double want) const {
    const double se = stderr_of_mean();
    return std::abs(mean() - want) <= std::max(kSigmas * se, kExactZero);
  }
};

Outcome haar_commutant() {
  const FdAlgebra a({Block{1, Rational(1, 2)}, Block{1, Rational(1, 2)}});
  const Representation r = make_representation(a, 64);
  const Rng master(61);
  double worst = 0.0;
  Accumulator tr1[2], tr2[2];
  for (std::uint64_t t = 0; t < 2000; ++t) {
    Rng rng = master.stream("acceptance-haar", 64, t);
    const ComplexMatrix v = haar_on_commutant(r, rng);
    worst = std::max({worst, unitarity_residual(v), commutation_residual(r, v)});
    const Complex a1 = normalized_trace(v);
    const Complex a2 = normalized_trace(v * v);
    tr1[0].add(a1.real());
    tr1[1].add(a1.imag());
    tr2[0].add(a2.real());
    tr2[1].add(a2.imag());
  }
  const bool moments = tr1[0].agrees(0) && tr1[1].agrees(0) && tr2[0].agrees(0) && tr2[1].agrees(0);
  return {worst <= kResidualTol && moments,
          "max residual " + fmt("%.3g", worst) + ", mean tr(V) = " + fmt("%.3g", tr1[0].mean()) +
              fmt("%+.3gi", tr1[1].mean()) + " (se " + fmt("%.2g", tr1[0].stderr_of_mean()) + "), mean tr(V^2) = " +
              fmt("%.3g", tr2[0].mean()) + fmt("%+.3gi", tr2[1].mean()) + " (se " +
              fmt("%.2g", tr2[0].stderr_of_mean()) + ")"};
}

Outcome polar_vs_haar() {
  ExperimentConfig cfg = default_config(ExperimentKind::PolarCompare);
  cfg.seed = 7;
  const ExperimentResult res = run_experiment(cfg);
  Outcome o;
  int agree = 0;
  int total = 0;
  double worst = 0.0;
  for (const auto& kr : res.per_k) {
    for (const Comparison& c : kr.comparisons) {
      ++total;
      if (c.agree) ++agree;
      if (c.sigma > 0) worst = std::max(worst, std::abs(c.haar_mean - c.polar_mean) / c.sigma);
    }
  }
  o.pass = total > 0 && agree == total && res.config.trials == 1000 && res.per_k.front().n == 64;
  o.detail = std::to_string(agree) + "/" + std::to_string(total) + " word parts agree at n=" +
             std::to_string(res.per_k.front().n) + ", " + std::to_string(cfg.trials) +
             " trials, largest gap " + fmt("%.2f", worst) + " sigma";
  return o;
}

Outcome decay() {
  ExperimentConfig cfg = default_config(ExperimentKind::Decay);
  cfg.seed = 7;
  const ExperimentResult res = run_experiment(cfg);
  const double first = res.per_k.front().series.at("norm").stats().mean;
  const double last = res.per_k.back().series.at("norm").stats().mean;
  std::string means;
  for (const auto& kr : res.per_k) means += std::to_string(kr.k) + ":" + fmt("%.4g", kr.series.at("norm").stats().mean) + " ";
  const bool trend = res.trend_ok.value_or(false);
  return {last <= kDecayRatio * first && trend && res.per_k.front().k == 32 && res.per_k.back().k == 256,
          "means " + means + "ratio " + fmt("%.3f", last / first) + ", trend " + (trend ? "ok" : "broken")};
}

Outcome concentration() {
  ExperimentConfig cfg = default_config(ExperimentKind::Concentration);
  cfg.seed = 7;
  const ExperimentResult res = run_experiment(cfg);
  const SeriesStats st = res.per_k.front().series.at(res.primary).stats();
  return {st.success_fraction >= kConcentrationMin && st.trials >= 200 && res.per_k.front().k == 128 &&
              cfg.epsilon == 0.1,
          "mu(Omega_k) = " + fmt("%.3f", st.success_fraction) + " over " + std::to_string(st.trials) +
              " trials at k=" + std::to_string(res.per_k.front().k)};
}

Outcome asfree() {
  ExperimentConfig cfg = default_config(ExperimentKind::AsFree);
  cfg.seed = 7;
  const ExperimentResult res = run_experiment(cfg);
  const SeriesStats fr = res.per_k.front().series.at("freeness").stats();
  const SeriesStats ms = res.per_k.front().series.at("microstate").stats();
  return {fr.success_fraction >= kFreenessMin && ms.success_fraction >= kFreenessMin && fr.trials == 100 &&
              cfg.m == 3 && cfg.gamma == 0.1 && res.per_k.front().k == 128,
          "freeness pass rate " + fmt("%.2f", fr.success_fraction) + " (worst deviation " + fmt("%.3g", fr.max) +
              "), microstate pass rate " + fmt("%.2f", ms.success_fraction)};
}

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

Outcome moment_oracle() {
  // Exact part: every word of length <= 6 in two free Haar unitaries over C.
  const FdAlgebra c = FdAlgebra::scalars();
  const SourceSet free_pair{std::make_shared<HaarUnitarySource>("U", "u"),
                            std::make_shared<HaarUnitarySource>("V", "v")};
  const std::pair<char, bool> alphabet[4] = {{'u', false}, {'u', true}, {'v', false}, {'v', true}};
  int words = 0;
  int wrong = 0;
  for (int len = 1; len <= 6; ++len) {
    std::vector<int> idx(static_cast<std::size_t>(len), 0);
    for (bool more = true; more;) {
      NCWord w;
      std::vector<std::pair<char, bool>> letters;
      for (int i : idx) {
        letters.push_back(alphabet[i]);
        w.items.emplace_back(Letter{alphabet[i].first == 'u' ? "U" : "V", std::string(1, alphabet[i].first),
                                    alphabet[i].second});
      }
      const double want = reduces_to_identity(letters) ? 1.0 : 0.0;
      if (amalg_moment(free_pair, c, w).block(0)(0, 0) != Complex(want)) ++wrong;
      ++words;
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == 4) idx[p++] = 0;
      more = p < idx.size();
    }
  }

  // Numerical part: Haar conjugation averages over D = C + C at n = 64.
  ExperimentConfig cfg = default_config(ExperimentKind::Decay);
  const Representation r = make_representation(cfg.algebra, 64);
  bool centered = false;
  const auto bs = build_constants(cfg, r, 2, centered);
  const SourceSet mixed{
      std::make_shared<HaarUnitarySource>("U", "u"),
      std::make_shared<ConstantMatrixSource>("C", r, std::map<std::string, ComplexMatrix>{{"B1", bs[0]}, {"B2", bs[1]}})};
  const std::vector<std::string> patterns{
      "U:u C:B1 U:u* C:B2",       "U:u C:B1 U:u* C:B1",      "C:B1 U:u C:B2 U:u*",
      "U:u C:B1 C:B2 U:u* C:B1",  "U:u C:B1 U:u* C:B2 C:B1", "U:u C:B2 U:u* C:B2 C:B1 C:B2",
      "U:u C:B1 U:u C:B2",        "U:u C:B1 U:u C:B2 U:u*",  "U:u* C:B1 U:u* C:B2",
      "U:u C:B1 U:u* C:B2 U:u*"};
  const std::size_t trials = 2000;
  const Rng master(11);
  std::vector<std::vector<Accumulator>> acc(patterns.size(), std::vector<Accumulator>(4));
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = master.stream("acceptance-moments", 64, t);
    const ComplexMatrix v = haar_on_commutant(r, rng);
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      ComplexMatrix prod = ComplexMatrix::Identity(64, 64);
      for (const WordItem& item : parse_word(patterns[p]).items) {
        const Letter& l = std::get<Letter>(item);
        if (l.source == "U") {
          prod = prod * (l.star ? ComplexMatrix(v.adjoint()) : v);
        } else {
          prod = prod * bs[l.name == "B1" ? 0 : 1];
        }
      }
      const DElement e = cond_expect(r, prod);
      for (std::size_t b = 0; b < 2; ++b) {
        acc[p][2 * b].add(e.block(b)(0, 0).real());
        acc[p][2 * b + 1].add(e.block(b)(0, 0).imag());
      }
    }
  }
  int agree = 0;
  std::string off;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const DElement want = amalg_moment(mixed, r.algebra(), parse_word(patterns[p]));
    bool ok = true;
    for (std::size_t b = 0; b < 2; ++b) {
      ok = ok && acc[p][2 * b].agrees(want.block(b)(0, 0).real()) && acc[p][2 * b + 1].agrees(want.block(b)(0, 0).imag());
    }
    if (ok) {
      ++agree;
    } else {
      off += " [" + patterns[p] + "]";
    }
  }
  return {wrong == 0 && agree == static_cast<int>(patterns.size()),
          std::to_string(words - wrong) + "/" + std::to_string(words) + " exact words, " + std::to_string(agree) +
              "/10 mixed words within 3 sigma over " + std::to_string(trials) + " trials" + off};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "fdim_acceptance_det";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  int same = 0;
  std::string detail;
  for (const std::string kind : {"decay", "concentration", "asfree", "polar-compare"}) {
    Json cfg = config_to_json(default_config(parse_experiment_kind(kind)));
    cfg["kGrid"] = Json::array({16, 32});
    cfg["trials"] = 8;
    if (kind == "asfree") cfg["m"] = 2;
    save_json_file(dir / (kind + ".json"), cfg);
    std::string csv[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / (kind + "-" + std::to_string(rep));
      std::ostringstream o, e;
      const int code = cli::run({"simulate", kind, "--config", (dir / (kind + ".json")).string(), "--seed", "314",
                                 "--out", out.string(), "--threads", rep == 0 ? "1" : "2"},
                                o, e);
      if (code != 0) return {false, kind + " exited with " + std::to_string(code) + ": " + e.str()};
      csv[rep] = slurp(out / "result.csv");
    }
    if (!csv[0].empty() && csv[0] == csv[1]) ++same;
    detail += kind + " " + std::to_string(csv[0].size()) + " bytes; ";
  }
  return {same == 4, std::to_string(same) + "/4 kinds byte-identical across reruns (" + detail + "threads 1 vs 2)"};
}

}  // namespace

int main() {
  criterion(1, "exact group calculus", 1, group_calculus);
  criterion(2, "class A cross-path consistency", 10, class_a_consistency);
  criterion(3, "B_s end to end, s=3/2", 5, [] { return bs_pipeline("3/2"); });
  criterion(3, "B_s end to end, s=5/4", 5, [] { return bs_pipeline("5/4"); });
  criterion(3, "B_s end to end, s=7/4", 5, [] { return bs_pipeline("7/4"); });
  criterion(4, "corner formula", 1, corner_formula);
  criterion(5, "conditional expectation", 5, cond_expect_residuals);
  criterion(6, "Haar on the commutant", 30, haar_commutant);
  criterion(7, "polar pathway vs Haar", 120, polar_vs_haar);
  criterion(8, "decay at finite k", 180, decay);
  criterion(9, "concentration", 120, concentration);
  criterion(10, "freeness with amalgamation", 120, asfree);
  criterion(11, "moment oracle", 60, moment_oracle);
  criterion(12, "determinism", 120, determinism);
  std::printf("%s: %d failing\n", failures == 0 ? "all criteria pass" : "acceptance FAILED", failures);
  return failures == 0 ? 0 : 1;
}
