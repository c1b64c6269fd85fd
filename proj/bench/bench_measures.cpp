// Serial reference enumeration against the bit-packed OpenMP kernel.
// Run with --benchmark_filter=... to pick one; args are (N, k).

#include <benchmark/benchmark.h>

#include "xcorr/kernels.hpp"
#include "xcorr/measures.hpp"
#include "xcorr/random.hpp"

namespace {

xcorr::SequenceFamily bench_family(std::size_t n) {
    xcorr::RandomStream rng(7, 0);
    return xcorr::sample_family(n, 4, rng);
}

void BM_PhiReference(benchmark::State& state) {
    const auto fam = bench_family(state.range(0));
    const std::size_t k = state.range(1);
    for (auto _ : state) benchmark::DoNotOptimize(xcorr::reference::phi(fam, k).value);
}

void BM_PhiParallel(benchmark::State& state) {
    const auto fam = bench_family(state.range(0));
    const std::size_t k = state.range(1);
    xcorr::MeasureOptions opts;
    opts.force = true;
    for (auto _ : state) benchmark::DoNotOptimize(xcorr::phi(fam, k, opts).value);
}

void BM_PhiSerialKernel(benchmark::State& state) {
    const auto fam = bench_family(state.range(0));
    const std::size_t k = state.range(1);
    xcorr::MeasureOptions opts;
    opts.force = true;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(xcorr::phi(fam, k, opts).value);
}

void BM_ScanWalk(benchmark::State& state) {
    const std::size_t n = state.range(0);
    xcorr::RandomStream rng(3, 0);
    const auto s = xcorr::sample_sequence(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(xcorr::kernels::scan_walk(s.words(), n).value);
}

void BM_ScanWalkBitwise(benchmark::State& state) {
    const std::size_t n = state.range(0);
    xcorr::RandomStream rng(3, 0);
    const auto s = xcorr::sample_sequence(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(xcorr::kernels::scan_walk_bitwise(s.words(), n).value);
}

}  // namespace

BENCHMARK(BM_PhiReference)->Args({32, 2})->Args({64, 2})->Args({16, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhiSerialKernel)->Args({32, 2})->Args({64, 2})->Args({16, 3})->Args({128, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhiParallel)->Args({32, 2})->Args({64, 2})->Args({16, 3})->Args({128, 2})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanWalk)->Arg(128)->Arg(1024);
BENCHMARK(BM_ScanWalkBitwise)->Arg(128)->Arg(1024);

BENCHMARK_MAIN();
