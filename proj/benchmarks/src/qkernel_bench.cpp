#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "qkm/qkernel.hpp"
#include "qkm/rng.hpp"

namespace {

qkm::Matrix random_angles(std::size_t n, std::uint64_t seed) {
    const double two_pi = 2.0 * std::acos(-1.0);
    qkm::SplitMix64 rng(seed);
    qkm::Matrix m(n, 2);
    for (std::size_t r = 0; r < n; ++r) {
        m.at(r, 0) = two_pi * rng.next_double();
        m.at(r, 1) = two_pi * rng.next_double();
    }
    return m;
}

void BM_kernel_entry_exact(benchmark::State& state) {
    const std::array<double, 2> x{1.2, 4.4};
    const std::array<double, 2> z{0.3, 2.9};
    for (auto _ : state) benchmark::DoNotOptimize(qkm::kernel_entry(x, z));
}

void BM_kernel_entry_shots(benchmark::State& state) {
    const std::array<double, 2> x{1.2, 4.4};
    const std::array<double, 2> z{0.3, 2.9};
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(qkm::kernel_entry(x, z, qkm::EstimationMode::shots,
                                                   state.range(0), ++seed));
}

void BM_kernel_gram(benchmark::State& state) {
    const auto points = random_angles(state.range(0), 7);
    for (auto _ : state) benchmark::DoNotOptimize(qkm::kernel_gram(points));
}

} // namespace

BENCHMARK(BM_kernel_entry_exact);
BENCHMARK(BM_kernel_entry_shots)->Arg(1024)->Arg(100000);
BENCHMARK(BM_kernel_gram)->Arg(10)->Arg(30)->Arg(60);
