#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace freedim {

/// Seeded random source. `stream` derives an independent generator for
/// one (experiment, k, trial) cell, so results do not depend on the order
/// in which trials run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng stream(std::string_view experiment, std::uint64_t k, std::uint64_t trial) const;

  /// Standard normal deviate.
  double normal();
  double uniform();
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace freedim
