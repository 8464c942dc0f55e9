#include "qkm/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>

#include "qkm/errors.hpp"
#include "qkm/parallel.hpp"
#include "qkm/qkernel.hpp"
#include "qkm/rng.hpp"

namespace qkm::bench {

namespace {

double label_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// Unit-interval scaling leaves the per-feature minimum at exactly zero, so
// an all-minimum row would have no amplitude encoding. The +1 translation
// moves every coordinate into [1, 2] without touching any pairwise
// distance, keeping classical and quantum clustering geometry identical.
Matrix unit_scale_and_shift(const Matrix& features) {
    Matrix out = fit_scaler(features, ScaleTarget::unit_interval).apply(features);
    for (double& v : out.values) v += 1.0;
    return out;
}

class Stopwatch {
public:
    explicit Stopwatch(double& sink) : sink_(sink), start_(clock::now()) {}
    ~Stopwatch() {
        sink_ += std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    double& sink_;
    clock::time_point start_;
};

} // namespace

const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::classical_svm: return "classical-svm";
    case Algorithm::quantum_svm: return "quantum-svm";
    case Algorithm::classical_kmeans: return "classical-kmeans";
    case Algorithm::quantum_kmeans: return "quantum-kmeans";
    }
    return "unknown";
}

BenchmarkReport run_benchmark(const Dataset& data, const BenchmarkConfig& config) {
    if (!data.labels) throw DataError("benchmark needs a labeled dataset");
    if (config.trials < 1) throw PreconditionError("trials must be >= 1");
    if (config.n_test == 0) throw PreconditionError("benchmark needs a nonempty test split");
    const int classes = data.num_classes();
    if (classes < 2) throw DataError("benchmark needs at least 2 classes");

    std::vector<int> indices =
        config.feature_indices.empty() ? std::vector<int>{0, 1} : config.feature_indices;
    if (indices.size() < 2)
        throw PreconditionError("benchmark needs at least 2 feature indices");

    Dataset selected = data;
    selected.features = data.features.select_columns(indices);
    selected.feature_names.clear();
    for (int c : indices)
        selected.feature_names.push_back(
            static_cast<std::size_t>(c) < data.feature_names.size()
                ? data.feature_names[static_cast<std::size_t>(c)]
                : "f" + std::to_string(c));

    BenchmarkReport report;
    report.trials = config.trials;
    for (int a = 0; a < kAlgorithmCount; ++a)
        report.algorithms.emplace_back(algorithm_name(static_cast<Algorithm>(a)));
    report.accuracy = Matrix(kAlgorithmCount, static_cast<std::size_t>(config.trials));
    report.wall_seconds.assign(kAlgorithmCount, 0.0);

    std::mutex time_mutex;
    auto add_time = [&](Algorithm a, double seconds) {
        std::lock_guard<std::mutex> lock(time_mutex);
        report.wall_seconds[static_cast<std::size_t>(a)] += seconds;
    };

    parallel_for(static_cast<std::size_t>(config.trials), [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(config.seed, 7, t, 0);
        auto [train, test] =
            subsample_split(selected, config.n_train, config.n_test, config.stratified,
                            trial_seed);
        const std::vector<int>& train_y = *train.labels;
        const std::vector<int>& test_y = *test.labels;

        double acc[kAlgorithmCount];
        double secs[kAlgorithmCount] = {0, 0, 0, 0};

        {
            Stopwatch sw(secs[0]);
            FittedScaler scaler = fit_scaler(train.features, ScaleTarget::standardize);
            Matrix train_s = scaler.apply(train.features);
            Matrix test_s = scaler.apply(test.features);
            double gamma = default_rbf_gamma(train_s);
            Matrix gram = rbf_kernel(train_s, train_s, gamma);
            SvmParams params = config.svm;
            params.seed = derive_seed(trial_seed, 8, 0, 0);
            OvrModel model = fit_ovr(gram, train_y, params);
            Matrix cross = rbf_kernel(test_s, train_s, gamma);
            acc[0] = label_accuracy(predict_ovr(model, cross), test_y);
        }

        {
            Stopwatch sw(secs[1]);
            FittedScaler scaler = fit_scaler(train.features, ScaleTarget::angle_interval);
            Matrix train_a = scaler.apply(train.features);
            Matrix test_a = scaler.apply(test.features);
            KernelGram gram = kernel_gram(train_a, config.kernel_mode, config.kernel_shots,
                                          derive_seed(trial_seed, 9, 0, 0));
            SvmParams params = config.svm;
            params.seed = derive_seed(trial_seed, 8, 1, 0);
            OvrModel model = fit_ovr(gram.matrix, train_y, params);
            Matrix cross = kernel_cross(test_a, train_a, config.kernel_mode,
                                        config.kernel_shots, derive_seed(trial_seed, 9, 1, 0));
            acc[1] = label_accuracy(predict_ovr(model, cross), test_y);
        }

        Matrix cluster_points = unit_scale_and_shift(test.features);

        {
            Stopwatch sw(secs[2]);
            KMeansConfig km;
            km.k = classes;
            km.distance.mode = DistanceMode::classical;
            km.max_iterations = config.kmeans_max_iterations;
            km.restarts = config.kmeans_restarts;
            km.seed = derive_seed(trial_seed, 10, 0, 0);
            km.distance.master_seed = km.seed;
            ClusterModel model = kmeans_fit(cluster_points, km);
            acc[2] = cluster_accuracy(model.assignments, test_y);
        }

        {
            Stopwatch sw(secs[3]);
            KMeansConfig km;
            km.k = classes;
            km.distance.mode = config.kmeans_distance;
            km.distance.shots = config.kmeans_shots;
            km.max_iterations = config.kmeans_max_iterations;
            km.restarts = config.kmeans_restarts;
            if (config.kmeans_distance == DistanceMode::quantum_shots)
                km.reassignment_fraction_epsilon = config.shots_epsilon;
            km.seed = derive_seed(trial_seed, 10, 1, 0);
            km.distance.master_seed = km.seed;
            ClusterModel model = kmeans_fit(cluster_points, km);
            acc[3] = cluster_accuracy(model.assignments, test_y);
        }

        for (int a = 0; a < kAlgorithmCount; ++a) {
            report.accuracy.at(static_cast<std::size_t>(a), t) = acc[a];
            add_time(static_cast<Algorithm>(a), secs[a]);
        }
    });

    report.means.assign(kAlgorithmCount, 0.0);
    for (int a = 0; a < kAlgorithmCount; ++a) {
        double sum = 0.0;
        for (int t = 0; t < config.trials; ++t)
            sum += report.accuracy.at(static_cast<std::size_t>(a), static_cast<std::size_t>(t));
        report.means[static_cast<std::size_t>(a)] = sum / config.trials;
    }
    return report;
}

} // namespace qkm::bench
