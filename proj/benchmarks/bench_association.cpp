#include "gymtrack/assignment.hpp"
#include "gymtrack/linkage.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gymtrack;

namespace {

void BM_Assign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostMatrix D(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (u(rng) > 0.1) D.set(r, c, u(rng));
  for (auto _ : state) benchmark::DoNotOptimize(assign(D, 0.6));
}
BENCHMARK(BM_Assign)->RangeMultiplier(2)->Range(4, 64);

void BM_CompleteLinkage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistanceMatrix D(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = u(rng);
      D.set(i, j, r < 0.2 ? CrossViewDistance::empty() : CrossViewDistance::finite(u(rng)));
    }
  for (auto _ : state) benchmark::DoNotOptimize(cluster_complete_linkage(D, 0.3));
}
BENCHMARK(BM_CompleteLinkage)->RangeMultiplier(2)->Range(4, 32);

}  // namespace
