#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qkm/distance.hpp"
#include "qkm/matrix.hpp"

namespace qkm {

/// Distance backend used by assign_points. classical is the analytic
/// oracle; quantum_exact reads the swap-test ancilla probability off the
/// statevector; quantum_shots samples it.
enum class DistanceMode { classical, quantum_exact, quantum_shots };

struct DistanceSpec {
    DistanceMode mode = DistanceMode::classical;
    int shots = kDefaultShots;
    std::uint64_t master_seed = 0;
};

enum class KMeansInit { random_points, kmeanspp };

struct KMeansConfig {
    int k = 2;
    DistanceSpec distance;
    int max_iterations = 100;
    /// Fraction of points allowed to change cluster at termination. 0 is
    /// the exact Lloyd stopping rule; shot-noise runs want a small slack
    /// (0.02 is the CLI default there) or they may never settle.
    double reassignment_fraction_epsilon = 0.0;
    KMeansInit init = KMeansInit::random_points;
    /// Independent re-initializations; the run with the lowest final WCSS
    /// wins. 1 reproduces plain Lloyd.
    int restarts = 1;
    std::uint64_t seed = 0;
};

struct ClusterModel {
    int k = 0;
    Matrix centroids;
    std::vector<int> assignments;
    int iterations_run = 0;
    std::vector<double> wcss_trace;
    std::vector<double> reassigned_fraction_trace;
    bool converged = false;
    double wcss = 0.0;
};

/// Seeding only: K distinct data rows (random_points) or k-means++
/// weighting. Deterministic per config.seed.
Matrix init_centroids(const Matrix& points, const KMeansConfig& config);

/// One assignment pass: argmin over centroids of squared distance computed
/// by the configured backend, ties to the lowest centroid index.
/// `iteration` salts the per-pair shot seeds so successive passes draw
/// fresh noise.
std::vector<int> assign_points(const Matrix& points, const Matrix& centroids,
                               const DistanceSpec& spec, int iteration = 0);

/// Componentwise means. An empty cluster is re-seeded at the point farthest
/// from its former centroid (lowest index on ties); K never shrinks.
Matrix update_centroids(const Matrix& points, std::span<const int> assignments,
                        const Matrix& previous_centroids);

/// Full Lloyd loop with restarts. Alternates assign/update until the
/// reassigned fraction drops to epsilon or max_iterations is hit.
ClusterModel kmeans_fit(const Matrix& points, const KMeansConfig& config);

/// Best agreement between assignments and labels over all cluster-to-label
/// permutations. Exhaustive, so max(K, classes) must stay <= 10.
double cluster_accuracy(std::span<const int> assignments, std::span<const int> labels);

/// Classical WCSS of an assignment; the objective traced by kmeans_fit.
double within_cluster_ss(const Matrix& points, std::span<const int> assignments,
                         const Matrix& centroids);

} // namespace qkm
