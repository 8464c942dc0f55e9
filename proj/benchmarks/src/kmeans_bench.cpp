#include <benchmark/benchmark.h>

#include "qkm/data.hpp"
#include "qkm/kmeans.hpp"

namespace {

qkm::Dataset blobs(std::size_t n, std::size_t dims) {
    qkm::BlobSpec spec;
    spec.n_points = n;
    spec.dims = dims;
    spec.k_clusters = 3;
    spec.stddev = 2.0;
    spec.seed = 11;
    return qkm::make_blobs(spec);
}

void fit(benchmark::State& state, qkm::DistanceMode mode, int shots) {
    const auto data = blobs(state.range(0), 5);
    qkm::KMeansConfig config;
    config.k = 3;
    config.seed = 1;
    config.distance.mode = mode;
    config.distance.shots = shots;
    config.distance.master_seed = 1;
    if (mode == qkm::DistanceMode::quantum_shots)
        config.reassignment_fraction_epsilon = 0.02;
    for (auto _ : state) benchmark::DoNotOptimize(qkm::kmeans_fit(data.features, config));
}

void BM_kmeans_classical(benchmark::State& state) {
    fit(state, qkm::DistanceMode::classical, 0);
}

void BM_kmeans_quantum_exact(benchmark::State& state) {
    fit(state, qkm::DistanceMode::quantum_exact, 0);
}

void BM_kmeans_quantum_shots(benchmark::State& state) {
    fit(state, qkm::DistanceMode::quantum_shots, 1024);
}

} // namespace

BENCHMARK(BM_kmeans_classical)->Arg(30)->Arg(100);
BENCHMARK(BM_kmeans_quantum_exact)->Arg(30)->Arg(100);
BENCHMARK(BM_kmeans_quantum_shots)->Arg(30)->Arg(100);
