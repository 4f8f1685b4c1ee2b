#include <benchmark/benchmark.h>

#include "rotree/cadlag.hpp"
#include "rotree/encodings.hpp"
#include "rotree/experiments.hpp"
#include "rotree/metric.hpp"
#include "rotree/sampler.hpp"

using namespace rotree;

namespace {

// the rotated-contour pair of the M1 experiment
void BM_M1Upper(benchmark::State& state) {
    const PlaneTree t = sample_conditioned(make_stable_law(1.5), static_cast<std::size_t>(state.range(0)), 5);
    const auto [x, y] = normalized_pair(t, ProcessPair::rot_contour_vs_mirror_luka);
    const ParamRep p = parametric_representation(x), q = parametric_representation(y);
    const auto grid = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(m1_upper(p, q, grid).value);
}

void BM_TreeCloud(benchmark::State& state) {
    const PlaneTree t = sample_conditioned(OffspringLaw::geometric(), 100'000, 6);
    const TimeScaledFn c = time_scaled(contour_walk(t), Interpolation::linear);
    const auto m = static_cast<std::size_t>(state.range(0));
    std::vector<double> times(m);
    for (std::size_t i = 0; i < m; ++i) times[i] = static_cast<double>(i) / static_cast<double>(m);
    for (auto _ : state) benchmark::DoNotOptimize(tree_cloud(c, times));
}

void BM_CorrelationDimension(benchmark::State& state) {
    const MetricCloud cloud = segment_cloud(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(correlation_dimension(cloud));
}

}  // namespace

BENCHMARK(BM_M1Upper)->Args({1000, 4096})->Args({10'000, 32'768})->Args({100'000, 262'144})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TreeCloud)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationDimension)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
