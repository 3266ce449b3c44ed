#include <benchmark/benchmark.h>

#include <fdim/construct.hpp>
#include <fdim/moments.hpp>
#include <fdim/sampling.hpp>

using namespace freedim;

namespace {

Representation half_half(std::int64_t n) {
  return make_representation(FdAlgebra({Block{1, Rational(1, 2)}, Block{1, Rational(1, 2)}}), n);
}

void BM_HaarOnCommutant(benchmark::State& state) {
  const Representation r = half_half(state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(haar_on_commutant(r, rng));
}
BENCHMARK(BM_HaarOnCommutant)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_CompressedPolar(benchmark::State& state) {
  const Representation r = half_half(state.range(0));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(compressed_polar_unitary(r, rng));
}
BENCHMARK(BM_CompressedPolar)->Arg(64)->Arg(128);

void BM_CondExpect(benchmark::State& state) {
  const Representation r = half_half(state.range(0));
  Rng rng(3);
  const ComplexMatrix x = ginibre(r.total_dim(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(cond_expect(r, x));
}
BENCHMARK(BM_CondExpect)->Arg(64)->Arg(256);

void BM_AmalgMoment(benchmark::State& state) {
  const auto len = static_cast<int>(state.range(0));
  const SourceSet s{std::make_shared<HaarUnitarySource>("U", "u"), std::make_shared<HaarUnitarySource>("V", "v")};
  NCWord w;
  for (int i = 0; i < len; ++i) w.items.emplace_back(Letter{i % 2 ? "V" : "U", i % 2 ? "v" : "u", (i / 2) % 2 == 1});
  for (auto _ : state) benchmark::DoNotOptimize(amalg_moment(s, FdAlgebra::scalars(), w));
}
BENCHMARK(BM_AmalgMoment)->DenseRange(2, 10, 2);

void BM_ConstructBs(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(construct_bs(Rational(7, 4), 1e-6));
}
BENCHMARK(BM_ConstructBs);

}  // namespace

BENCHMARK_MAIN();
