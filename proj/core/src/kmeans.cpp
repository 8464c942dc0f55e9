#include "qkm/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "qkm/errors.hpp"
#include "qkm/parallel.hpp"
#include "qkm/rng.hpp"

namespace qkm {

namespace {

void validate(const Matrix& points, const KMeansConfig& config) {
    if (config.k < 1) throw PreconditionError("k must be >= 1");
    if (config.max_iterations < 1) throw PreconditionError("max_iterations must be >= 1");
    if (!(config.reassignment_fraction_epsilon >= 0.0) ||
        config.reassignment_fraction_epsilon >= 1.0)
        throw PreconditionError("reassignment_fraction_epsilon must lie in [0, 1)");
    if (config.restarts < 1) throw PreconditionError("restarts must be >= 1");
    if (config.distance.mode == DistanceMode::quantum_shots && config.distance.shots < 1)
        throw PreconditionError("shots must be >= 1");
    if (points.rows < static_cast<std::size_t>(config.k))
        throw DataError("cannot place " + std::to_string(config.k) + " centroids on " +
                        std::to_string(points.rows) + " points");
}

Matrix init_random_points(const Matrix& points, int k, SplitMix64& rng) {
    // Partial Fisher-Yates: the first k slots become a uniform k-subset in
    // random order.
    std::vector<std::size_t> order(points.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        auto j = i + rng.next_below(order.size() - i);
        std::swap(order[i], order[j]);
    }
    Matrix centroids(static_cast<std::size_t>(k), points.cols);
    for (int c = 0; c < k; ++c) {
        auto src = points.row(order[static_cast<std::size_t>(c)]);
        std::copy(src.begin(), src.end(), centroids.row(static_cast<std::size_t>(c)).begin());
    }
    return centroids;
}

Matrix init_kmeanspp(const Matrix& points, int k, SplitMix64& rng) {
    Matrix centroids(static_cast<std::size_t>(k), points.cols);
    auto first = rng.next_below(points.rows);
    {
        auto src = points.row(first);
        std::copy(src.begin(), src.end(), centroids.row(0).begin());
    }
    std::vector<double> best_d2(points.rows, std::numeric_limits<double>::infinity());
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.rows; ++i) {
            double d2 = classical_distance_oracle(
                points.row(i), centroids.row(static_cast<std::size_t>(c - 1)));
            best_d2[i] = std::min(best_d2[i], d2);
            total += best_d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.next_double() * total;
            double cum = 0.0;
            pick = points.rows - 1;
            for (std::size_t i = 0; i < points.rows; ++i) {
                cum += best_d2[i];
                if (target < cum) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All points coincide with chosen centroids; any row works.
            pick = rng.next_below(points.rows);
        }
        auto src = points.row(pick);
        std::copy(src.begin(), src.end(), centroids.row(static_cast<std::size_t>(c)).begin());
    }
    return centroids;
}

double backend_distance(std::span<const double> point, std::span<const double> centroid,
                        const DistanceSpec& spec, std::uint64_t pair_seed) {
    switch (spec.mode) {
    case DistanceMode::classical:
        return classical_distance_oracle(point, centroid);
    case DistanceMode::quantum_exact:
        return quantum_distance(point, centroid, EstimationMode::exact).squared_distance;
    case DistanceMode::quantum_shots:
        return quantum_distance(point, centroid, EstimationMode::shots, spec.shots, pair_seed)
            .squared_distance;
    }
    throw PreconditionError("unknown distance mode");
}

} // namespace

Matrix init_centroids(const Matrix& points, const KMeansConfig& config) {
    validate(points, config);
    SplitMix64 rng(derive_seed(config.seed, 3, 0, 0));
    return config.init == KMeansInit::random_points
               ? init_random_points(points, config.k, rng)
               : init_kmeanspp(points, config.k, rng);
}

std::vector<int> assign_points(const Matrix& points, const Matrix& centroids,
                               const DistanceSpec& spec, int iteration) {
    if (points.cols != centroids.cols)
        throw ShapeError("points are " + std::to_string(points.cols) + "-dimensional, centroids " +
                         std::to_string(centroids.cols));
    if (centroids.rows == 0) throw PreconditionError("no centroids");

    // A zero-norm centroid cannot be amplitude-encoded; nudge it off the
    // origin. The copy keeps the caller's centroids intact.
    Matrix working = centroids;
    if (spec.mode != DistanceMode::classical) {
        for (std::size_t c = 0; c < working.rows; ++c) {
            auto row = working.row(c);
            double n2 = 0.0;
            for (double v : row) n2 += v * v;
            if (n2 == 0.0) {
                working.at(c, 0) = 1e-9;
                std::fprintf(stderr, "qkm: centroid %zu has zero norm; perturbed by 1e-9\n", c);
            }
        }
    }

    std::vector<int> assignments(points.rows, 0);
    parallel_for(points.rows, [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < working.rows; ++c) {
            std::uint64_t pair_seed =
                derive_seed(spec.master_seed, i, c, static_cast<std::uint64_t>(iteration));
            double d2 = backend_distance(points.row(i), working.row(c), spec, pair_seed);
            if (d2 < best) {
                best = d2;
                best_c = static_cast<int>(c);
            }
        }
        assignments[i] = best_c;
    });
    return assignments;
}

Matrix update_centroids(const Matrix& points, std::span<const int> assignments,
                        const Matrix& previous_centroids) {
    if (assignments.size() != points.rows)
        throw ShapeError("assignment count does not match point count");
    const std::size_t k = previous_centroids.rows;
    for (int a : assignments)
        if (a < 0 || static_cast<std::size_t>(a) >= k)
            throw PreconditionError("assignment out of range");

    Matrix centroids(k, points.cols);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.rows; ++i) {
        auto c = static_cast<std::size_t>(assignments[i]);
        ++counts[c];
        auto row = points.row(i);
        for (std::size_t d = 0; d < points.cols; ++d) centroids.at(c, d) += row[d];
    }

    std::vector<std::size_t> reused;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            for (std::size_t d = 0; d < points.cols; ++d)
                centroids.at(c, d) /= static_cast<double>(counts[c]);
            continue;
        }
        // Empty cluster: re-seed at the point farthest from this cluster's
        // former centroid, skipping points already spent on earlier
        // re-seeds. Ties go to the lowest point index.
        std::size_t pick = points.rows;
        double far = -1.0;
        for (std::size_t i = 0; i < points.rows; ++i) {
            if (std::find(reused.begin(), reused.end(), i) != reused.end()) continue;
            double d2 = classical_distance_oracle(points.row(i), previous_centroids.row(c));
            if (d2 > far) {
                far = d2;
                pick = i;
            }
        }
        if (pick == points.rows)
            throw DataError("more empty clusters than points available for re-seeding");
        reused.push_back(pick);
        auto src = points.row(pick);
        std::copy(src.begin(), src.end(), centroids.row(c).begin());
    }
    return centroids;
}

double within_cluster_ss(const Matrix& points, std::span<const int> assignments,
                         const Matrix& centroids) {
    if (assignments.size() != points.rows)
        throw ShapeError("assignment count does not match point count");
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows; ++i)
        total += classical_distance_oracle(
            points.row(i), centroids.row(static_cast<std::size_t>(assignments[i])));
    return total;
}

namespace {

ClusterModel fit_once(const Matrix& points, const KMeansConfig& config,
                      std::uint64_t init_seed, std::uint64_t distance_seed) {
    KMeansConfig local = config;
    local.seed = init_seed;
    DistanceSpec dspec = config.distance;
    dspec.master_seed = distance_seed;

    ClusterModel model;
    model.k = config.k;
    model.centroids = init_centroids(points, local);

    std::vector<int> assignments;
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        std::vector<int> next = assign_points(points, model.centroids, dspec, iter);
        model.iterations_run = iter;
        if (iter > 1) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < next.size(); ++i)
                if (next[i] != assignments[i]) ++changed;
            double fraction = static_cast<double>(changed) / static_cast<double>(next.size());
            model.reassigned_fraction_trace.push_back(fraction);
            if (fraction <= config.reassignment_fraction_epsilon) {
                assignments = std::move(next);
                model.wcss_trace.push_back(
                    within_cluster_ss(points, assignments, model.centroids));
                model.converged = true;
                break;
            }
        }
        assignments = std::move(next);
        model.centroids = update_centroids(points, assignments, model.centroids);
        model.wcss_trace.push_back(within_cluster_ss(points, assignments, model.centroids));
    }

    model.assignments = std::move(assignments);
    model.wcss = model.wcss_trace.back();
    return model;
}

} // namespace

ClusterModel kmeans_fit(const Matrix& points, const KMeansConfig& config) {
    validate(points, config);
    ClusterModel best;
    bool have_best = false;
    for (int r = 0; r < config.restarts; ++r) {
        auto ur = static_cast<std::uint64_t>(r);
        ClusterModel candidate =
            fit_once(points, config, derive_seed(config.seed, 4, ur, 0),
                     derive_seed(config.distance.master_seed, 5, ur, 0));
        if (!have_best || candidate.wcss < best.wcss) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    return best;
}

double cluster_accuracy(std::span<const int> assignments, std::span<const int> labels) {
    if (assignments.size() != labels.size())
        throw ShapeError("assignments and labels differ in length");
    if (assignments.empty()) throw PreconditionError("empty inputs");

    int width = 0;
    for (int a : assignments) {
        if (a < 0) throw PreconditionError("negative cluster id");
        width = std::max(width, a + 1);
    }
    for (int l : labels) {
        if (l < 0) throw PreconditionError("negative label");
        width = std::max(width, l + 1);
    }
    constexpr int kPermutationBound = 10;
    if (width > kPermutationBound)
        throw CapacityError("permutation matching supports at most " +
                            std::to_string(kPermutationBound) +
                            " classes; use a Hungarian matcher beyond that");

    auto w = static_cast<std::size_t>(width);
    std::vector<std::size_t> confusion(w * w, 0);
    for (std::size_t i = 0; i < assignments.size(); ++i)
        ++confusion[static_cast<std::size_t>(assignments[i]) * w +
                    static_cast<std::size_t>(labels[i])];

    std::vector<std::size_t> perm(w);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::size_t best = 0;
    do {
        std::size_t agree = 0;
        for (std::size_t c = 0; c < w; ++c) agree += confusion[c * w + perm[c]];
        best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return static_cast<double>(best) / static_cast<double>(assignments.size());
}

} // namespace qkm
