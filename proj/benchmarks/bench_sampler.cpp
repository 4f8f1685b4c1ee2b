#include <benchmark/benchmark.h>

#include "rotree/sampler.hpp"

using namespace rotree;

namespace {

void sample(benchmark::State& state, const OffspringLaw& law) {
    Rng rng(1);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    if (!admissible(law, n)) ++n;
    for (auto _ : state) benchmark::DoNotOptimize(sample_conditioned(law, n, rng));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_SampleGeometric(benchmark::State& state) { sample(state, OffspringLaw::geometric()); }
void BM_SampleBinary(benchmark::State& state) { sample(state, OffspringLaw::binary()); }
void BM_SampleStable(benchmark::State& state) { sample(state, make_stable_law(1.5)); }

}  // namespace

BENCHMARK(BM_SampleGeometric)->RangeMultiplier(100)->Range(10, 100'000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleBinary)->RangeMultiplier(100)->Range(10, 100'000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampleStable)->RangeMultiplier(100)->Range(10, 100'000)->Unit(benchmark::kMicrosecond);
