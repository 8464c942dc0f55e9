#include <benchmark/benchmark.h>

#include <vector>

#include "qkm/distance.hpp"
#include "qkm/rng.hpp"

namespace {

std::vector<double> random_vector(qkm::SplitMix64& rng, std::size_t dims) {
    std::vector<double> v(dims);
    for (auto& x : v) x = 20.0 * rng.next_double() - 10.0;
    return v;
}

void BM_classical_distance(benchmark::State& state) {
    qkm::SplitMix64 rng(1);
    const auto xi = random_vector(rng, state.range(0));
    const auto xj = random_vector(rng, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qkm::classical_distance_oracle(xi, xj));
}

void BM_quantum_distance_exact(benchmark::State& state) {
    qkm::SplitMix64 rng(2);
    const auto xi = random_vector(rng, state.range(0));
    const auto xj = random_vector(rng, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qkm::quantum_distance(xi, xj).squared_distance);
}

void BM_quantum_distance_shots(benchmark::State& state) {
    qkm::SplitMix64 rng(3);
    const auto xi = random_vector(rng, 4);
    const auto xj = random_vector(rng, 4);
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(qkm::quantum_distance(xi, xj,
                                                       qkm::EstimationMode::shots,
                                                       state.range(0), ++seed)
                                     .squared_distance);
}

void BM_encode_pair(benchmark::State& state) {
    qkm::SplitMix64 rng(4);
    const auto xi = random_vector(rng, state.range(0));
    const auto xj = random_vector(rng, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qkm::build_encoded_pair(xi, xj));
}

} // namespace

BENCHMARK(BM_classical_distance)->Arg(2)->Arg(16)->Arg(128);
BENCHMARK(BM_quantum_distance_exact)->Arg(2)->Arg(16)->Arg(128);
BENCHMARK(BM_quantum_distance_shots)->Arg(1024)->Arg(100000);
BENCHMARK(BM_encode_pair)->Arg(2)->Arg(128);

BENCHMARK_MAIN();
