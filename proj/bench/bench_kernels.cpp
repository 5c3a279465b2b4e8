// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qknots/braid.hpp"
#include "qknots/bracket.hpp"
#include "qknots/kernels.hpp"
#include "qknots/quantum_knot.hpp"

namespace {

using namespace qknots;

// Closure of (s1 s2^-1)^k on three strands: 2k crossings.
LinkDiagram alternating_closure(int k) {
    std::string w = "n=3:";
    for (int i = 0; i < k; ++i) w += " s1 s2^-1";
    return braid_closure(parse_braid(w));
}

void BM_StateHistogramSerial(benchmark::State& st) {
    const auto p = loop_problem(alternating_closure(static_cast<int>(st.range(0)) / 2));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::state_histogram_serial(p));
    st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << st.range(0)));
}

void BM_StateHistogramParallel(benchmark::State& st) {
    const auto p = loop_problem(alternating_closure(static_cast<int>(st.range(0)) / 2));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::state_histogram_parallel(p));
    st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << st.range(0)));
}

FlatDiagram flat_closure(int k) { return flatten(alternating_closure(k)); }

void BM_ClassifySerial(benchmark::State& st) {
    const auto f = flat_closure(static_cast<int>(st.range(0)) / 2);
    for (auto _ : st) benchmark::DoNotOptimize(classify_resolutions_serial(f));
}

void BM_ClassifyParallel(benchmark::State& st) {
    const auto f = flat_closure(static_cast<int>(st.range(0)) / 2);
    for (auto _ : st) benchmark::DoNotOptimize(classify_resolutions_parallel(f));
}

std::vector<std::complex<double>> random_block(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = {u(rng), u(rng)};
    return v;
}

void BM_MatmulSerial(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_block(n * n, 1), b = random_block(n * n, 2);
    std::vector<std::complex<double>> c(n * n);
    for (auto _ : st) {
        kernels::matmul_serial(a.data(), b.data(), c.data(), n, n, n);
        benchmark::DoNotOptimize(c.data());
    }
}

void BM_MatmulParallel(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const auto a = random_block(n * n, 1), b = random_block(n * n, 2);
    std::vector<std::complex<double>> c(n * n);
    for (auto _ : st) {
        kernels::matmul_parallel(a.data(), b.data(), c.data(), n, n, n);
        benchmark::DoNotOptimize(c.data());
    }
}

}  // namespace

BENCHMARK(BM_StateHistogramSerial)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StateHistogramParallel)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifySerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatmulSerial)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_MatmulParallel)->RangeMultiplier(4)->Range(16, 256);

BENCHMARK_MAIN();
