#include <benchmark/benchmark.h>

#include "gaborlab/clifford.hpp"
#include "gaborlab/gabor.hpp"
#include "gaborlab/rng.hpp"
#include "gaborlab/spark.hpp"

using namespace gaborlab;

namespace {

void BM_FullSparkScan(benchmark::State& state) {
    const int n = (int)state.range(0);
    FiniteAbelianGroup g({n});
    Window f = random_window(g, 42);
    SparkOptions opt;
    opt.workers = 1;
    for (auto _ : state) {
        SparkReport rep = is_full_spark(f, opt);
        benchmark::DoNotOptimize(rep.subsets_checked);
    }
    state.counters["subsets"] = (double)binomial(n * n, n);
    state.counters["subsets/s"] = benchmark::Counter(
        (double)binomial(n * n, n), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_FullSparkScan)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SparkLadder3x3(benchmark::State& state) {
    FiniteAbelianGroup g({3, 3});
    Window f = random_window(g, 7);
    SparkOptions opt;
    opt.budget = 2'000'000;
    opt.workers = 1;
    for (auto _ : state) {
        SparkReport rep = spark(f, opt);
        benchmark::DoNotOptimize(rep.spark_upper);
    }
}
BENCHMARK(BM_SparkLadder3x3)->Unit(benchmark::kMillisecond);

void BM_Stft(benchmark::State& state) {
    const int n = (int)state.range(0);
    FiniteAbelianGroup g({n});
    Window phi = random_window(g, 1), f = random_window(g, 2);
    for (auto _ : state) benchmark::DoNotOptimize(stft(phi, f));
}
BENCHMARK(BM_Stft)->Arg(8)->Arg(16)->Arg(32);

void BM_CliffordUnitary(benchmark::State& state) {
    const long long n = state.range(0);
    SL2ModN f = random_sl2(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(clifford_unitary(f).u.a.size());
}
BENCHMARK(BM_CliffordUnitary)->Arg(9)->Arg(15);

void BM_TraceScan(benchmark::State& state) {
    const long long n = state.range(0);
    for (auto _ : state) {
        TraceScanReport rep = trace_abs_scan(n, 1);
        benchmark::DoNotOptimize(rep.min_abs_trace);
    }
}
BENCHMARK(BM_TraceScan)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
