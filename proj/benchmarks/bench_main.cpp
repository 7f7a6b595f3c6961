#include <benchmark/benchmark.h>

#include <random>

#include "barron/poly_repu.hpp"
#include "barron/pushforward.hpp"
#include "barron/spectral.hpp"
#include "barron/verify.hpp"

using namespace barron;

namespace {

DiscreteMeasure random_measure(std::size_t d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DiscreteMeasure m(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(d);
    for (auto& v : w) v = u(rng);
    m.add(std::move(w), u(rng), u(rng));
  }
  return m;
}

void BM_Evaluate(benchmark::State& state) {
  const ShallowNet net(Activation::tanh(), random_measure(8, state.range(0), 1));
  const std::vector<double> x(8, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(net, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(64)->Arg(1024)->Arg(16384);

void BM_PolyToRepu(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Polynomial p;
  p.d = d;
  p.s = s;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& a : MultiIndexTable(s, d).indices()) p.coeffs[a] = u(rng);
  const auto pairs = build_pairs(s, d);
  for (auto _ : state) benchmark::DoNotOptimize(poly_to_repu(p, pairs));
}
BENCHMARK(BM_PolyToRepu)->Args({2, 2})->Args({4, 3})->Args({4, 4});

void BM_RepuLower(benchmark::State& state) {
  const ShallowNet net(Activation::repu(2), random_measure(4, 50, 2));
  const QuadratureSpec q{QuadRule::kGaussLegendre, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(repu_lower(net, q));
}
BENCHMARK(BM_RepuLower)->Arg(32)->Arg(256);

void BM_SpectralToRepu(benchmark::State& state) {
  const SpectralRep rep(2, {{{1.0, 2.0}, {0.5, 0.0}}, {{-1.0, -2.0}, {0.5, 0.0}}});
  const QuadratureSpec q{QuadRule::kGaussLegendre, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_to_repu(rep, 2, q));
}
BENCHMARK(BM_SpectralToRepu)->Arg(128)->Arg(512);

void BM_SupErrorGrid(benchmark::State& state) {
  const ShallowNet a(Activation::tanh(), random_measure(2, 200, 4));
  const ShallowNet b(Activation::tanh(), random_measure(2, 200, 5));
  for (auto _ : state) benchmark::DoNotOptimize(sup_error(a, b, Sampler::grid(100)));
}
BENCHMARK(BM_SupErrorGrid);

}  // namespace
BENCHMARK_MAIN();
