#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkm/data.hpp"
#include "qkm/distance.hpp"
#include "qkm/kmeans.hpp"
#include "qkm/matrix.hpp"
#include "qkm/svm.hpp"

namespace qkm::bench {

/// Row order of every report: the four algorithms compared by the
/// trinary-classification tables.
enum class Algorithm : int {
    classical_svm = 0,
    quantum_svm = 1,
    classical_kmeans = 2,
    quantum_kmeans = 3,
};
inline constexpr int kAlgorithmCount = 4;
const char* algorithm_name(Algorithm a);

struct BenchmarkConfig {
    int trials = 5;
    std::size_t n_train = 30;
    std::size_t n_test = 30;
    /// Columns fed to all four algorithms; empty means {0, 1}. The quantum
    /// kernel always consumes the first two of these.
    std::vector<int> feature_indices;
    bool stratified = true;
    std::uint64_t seed = 0;

    EstimationMode kernel_mode = EstimationMode::shots;
    std::int64_t kernel_shots = kDefaultShots;

    DistanceMode kmeans_distance = DistanceMode::quantum_shots;
    int kmeans_shots = 100000;
    /// Reassignment slack used only when kmeans_distance is quantum_shots;
    /// exact modes terminate at zero reassignments.
    double shots_epsilon = 0.02;
    int kmeans_restarts = 10;
    int kmeans_max_iterations = 100;

    SvmParams svm;
};

struct BenchmarkReport {
    std::vector<std::string> algorithms;
    /// kAlgorithmCount x trials accuracy table.
    Matrix accuracy;
    std::vector<double> means;
    /// Accumulated wall time per algorithm across trials, in seconds.
    /// Informational only; callers that need reproducible output bytes must
    /// not print it.
    std::vector<double> wall_seconds;
    int trials = 0;
};

/// Runs the four algorithms on identical per-trial splits of `data`:
/// classical RBF SVM (standardized features), quantum-kernel SVM (angle
/// scaled, train-fitted), classical K-means and quantum K-means (both on
/// the unit-scaled, origin-shifted test split, K = class count). Labeled
/// data required. Trials execute in parallel on derived seeds; the report
/// is ordered by trial index.
BenchmarkReport run_benchmark(const Dataset& data, const BenchmarkConfig& config);

} // namespace qkm::bench
