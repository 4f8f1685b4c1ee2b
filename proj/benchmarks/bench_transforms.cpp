#include <benchmark/benchmark.h>

#include "rotree/encodings.hpp"
#include "rotree/sampler.hpp"
#include "rotree/transforms.hpp"

using namespace rotree;

namespace {

PlaneTree tree_of(benchmark::State& state) {
    return sample_conditioned(OffspringLaw::geometric(), static_cast<std::size_t>(state.range(0)), 3);
}

void BM_Rotate(benchmark::State& state) {
    const PlaneTree t = tree_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(rotate(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RotateRecursive(benchmark::State& state) {
    const PlaneTree t = tree_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(rotate_recursive(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ContourWalk(benchmark::State& state) {
    const PlaneTree t = tree_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(contour_walk(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Looptree(benchmark::State& state) {
    const PlaneTree t = tree_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(looptree(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LemmaOracles(benchmark::State& state) {
    const PlaneTree t = tree_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(lemma_oracles(t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Rotate)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RotateRecursive)->RangeMultiplier(10)->Range(1000, 100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContourWalk)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Looptree)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LemmaOracles)->RangeMultiplier(10)->Range(100, 10'000)->Unit(benchmark::kMillisecond);
