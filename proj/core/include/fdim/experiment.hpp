#pragma once

#include "fdim/random.hpp"
#include "fdim/sampling.hpp"
#include "fdim/serialization.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace freedim {

enum class ExperimentKind { Decay, Concentration, AsFree, PolarCompare };

std::string to_string(ExperimentKind kind);
/// Throws InvalidArgument on an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);

/// A word pattern such as "u1 B1 u2 B1 u1*": unitary letters u<j>/u<j>*
/// and constant slots B<s>. Adjacent unitary letters form one group word.
struct WordPattern {
  using Segment = std::variant<GroupWord, int>;  ///< group word or constant index (1-based)
  std::vector<Segment> segments;
  int generators = 0;
  int constants = 0;
  std::string text;
};

/// Throws InvalidArgument if a token is malformed, a unitary run is not
/// reduced, or two constant slots are adjacent.
WordPattern parse_word_pattern(const std::string& text);

/// Constant matrices B_1..B_s at each dimension.
struct ConstantsSpec {
  /// "shift-cos": B_s = centered (S^s + S^-s)/2 + diag(cos(2 pi s j/n + s)),
  /// scaled to unit norm, S the cyclic shift. "explicit": `matrices` keyed
  /// by dimension then name ("B1", ...).
  std::string recipe = "shift-cos";
  std::map<std::int64_t, std::map<std::string, ComplexMatrix>> matrices;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Decay;
  FdAlgebra algebra = FdAlgebra({Block{1, Rational(1, 2)}, Block{1, Rational(1, 2)}});
  std::vector<std::int64_t> k_grid{32, 64, 128, 256};
  std::string word = "u1 B1 u2 B1 u1*";
  /// Word patterns compared by polar-compare.
  std::vector<std::string> words{"u1", "u1 u1", "u1 B1 u1* B1"};
  /// Families for asfree: each is a list of constant names.
  std::vector<std::vector<std::string>> families{{"B1", "B2"}, {"B3", "B4"}};
  ConstantsSpec constants;
  double epsilon = 0.1;
  int trials = 100;
  double norm_bound = 10.0;
  int m = 3;
  double gamma = 0.1;
  /// "haar" or "polar" for decay / concentration / asfree.
  std::string sampler = "haar";
  std::uint64_t seed = 0;
};

/// Defaults for each kind.
ExperimentConfig default_config(ExperimentKind kind);

Json config_to_json(const ExperimentConfig& cfg);
/// Missing keys take the kind's defaults. Throws SchemaError with a JSON
/// pointer on any violation.
ExperimentConfig config_from_json(const Json& j, std::optional<ExperimentKind> expected = std::nullopt);

struct SeriesStats {
  double mean = 0.0;
  double max = 0.0;
  double stderr_of_mean = 0.0;
  double success_fraction = 0.0;
  std::size_t trials = 0;
};

struct Series {
  std::vector<double> values;
  std::vector<char> success;
  SeriesStats stats() const;
};

struct Comparison {
  std::string word;
  std::string part;  ///< "re" or "im"
  double haar_mean = 0.0;
  double polar_mean = 0.0;
  double sigma = 0.0;  ///< standard error of the difference
  bool agree = false;
};

struct KResult {
  std::int64_t k = 0;
  std::int64_t n = 0;
  std::vector<std::int64_t> multiplicities;
  std::map<std::string, Series> series;
  std::vector<Comparison> comparisons;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  /// Name of the series whose statistics summarise the experiment.
  std::string primary;
  std::vector<KResult> per_k;
  std::vector<std::string> warnings;
  /// Decay only: per-k means nonincreasing within two standard errors.
  std::optional<bool> trend_ok;
};

struct RunOptions {
  unsigned threads = 1;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});
ExperimentResult run_decay_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});
ExperimentResult run_asfree_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});
ExperimentResult run_polar_compare(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Constants B_1..B_count at the representation's dimension, centered.
/// Sets `centered` if any explicit matrix had to be centered.
std::vector<ComplexMatrix> build_constants(const ExperimentConfig& cfg, const Representation& r, int count,
                                           bool& centered);

Json result_to_json(const ExperimentResult& result);
/// Header "k,n,trial,series,statistic", one row per trial and series.
std::string result_to_csv(const ExperimentResult& result);

}  // namespace freedim
