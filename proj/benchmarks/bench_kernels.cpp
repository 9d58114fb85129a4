#include <benchmark/benchmark.h>

#include <random>

#include "adap/adaptive.hpp"
#include "adap/ap_core.hpp"
#include "adap/validity.hpp"
#include "fixtures.hpp"

namespace {

adap::SimilarityMatrix blobs(std::size_t n) {
    const std::size_t k = 5;
    return adap::euclidean_similarity(fixture::grid_blobs(k, n / k, 6.0, 42).x);
}

void BM_MessageSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = blobs(n);
    auto msg = adap::MessageState::zeros(s.n(), 0.5);
    for (auto _ : state) {
        adap::update_responsibilities(s, msg);
        adap::update_availabilities(msg);
        benchmark::DoNotOptimize(msg.a.values().data());
    }
    state.SetComplexityN(static_cast<long>(s.n()));
}
BENCHMARK(BM_MessageSweep)->RangeMultiplier(2)->Range(50, 800)->Complexity(benchmark::oNSquared);

void BM_ReferenceSweep(benchmark::State& state) {
    const auto s = blobs(static_cast<std::size_t>(state.range(0)));
    auto msg = adap::MessageState::zeros(s.n(), 0.5);
    for (auto _ : state) {
        adap::reference::update_responsibilities(s, msg);
        adap::reference::update_availabilities(msg);
        benchmark::DoNotOptimize(msg.a.values().data());
    }
}
BENCHMARK(BM_ReferenceSweep)->Arg(50)->Arg(100)->Arg(200);

void BM_Silhouette(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = fixture::grid_blobs(5, n / 5, 6.0, 7);
    const auto d = adap::DissimilarityMatrix::euclidean(data.x.values);
    for (auto _ : state) benchmark::DoNotOptimize(adap::silhouette(data.truth, d));
}
BENCHMARK(BM_Silhouette)->Arg(100)->Arg(400)->Arg(1000);

void BM_AdaptiveScan(benchmark::State& state) {
    const auto s = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(adap::run_adaptive_scan(s).records.size());
}
BENCHMARK(BM_AdaptiveScan)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
