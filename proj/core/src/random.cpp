#include "fdim/random.hpp"

namespace freedim {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t tag, std::uint64_t k, std::uint64_t trial) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(tag), hi32(tag), lo32(k), hi32(k), lo32(trial), hi32(trial)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seeded(seed, 0, 0, 0)) {}

Rng Rng::stream(std::string_view experiment, std::uint64_t k, std::uint64_t trial) const {
  Rng out(seed_);
  out.engine_ = seeded(seed_, fnv1a(experiment), k, trial);
  return out;
}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

}  // namespace freedim
