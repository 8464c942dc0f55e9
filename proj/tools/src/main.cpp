// qkm: hybrid quantum K-means and kernel-SVM toolkit.
//
// Exit codes: 0 success, 2 usage/validation, 3 non-convergence,
// 4 data error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkm/benchmark.hpp"
#include "qkm/data.hpp"
#include "qkm/distance.hpp"
#include "qkm/errors.hpp"
#include "qkm/kmeans.hpp"
#include "qkm/qkernel.hpp"
#include "qkm/rng.hpp"
#include "qkm/svm.hpp"

#include "svg_plot.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitDataError = 4;

using Setters = std::map<std::string, std::function<void(const json&)>>;

template <typename T>
void bind_key(Setters& setters, const std::string& key, T& var) {
    setters[key] = [&var](const json& v) { var = v.get<T>(); };
}

// JSON config merged under explicit flags: a key only applies when its
// option was not given on the command line.
void apply_config(CLI::App* cmd, const std::string& path, const Setters& setters) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw qkm::DataError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw qkm::ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw qkm::ParseError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        auto it = setters.find(key);
        if (it == setters.end())
            throw qkm::PreconditionError("unknown config key '" + key + "'");
        auto* opt = cmd->get_option_no_throw("--" + key);
        if (opt != nullptr && opt->count() > 0) continue;
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw qkm::ParseError("config key '" + key + "': " + e.what());
        }
    }
}

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// "auto" label handling: use a column literally named "label" when the
// header has one.
std::optional<std::string> resolve_label_column(const std::filesystem::path& path,
                                                const std::string& requested) {
    if (requested == "none") return std::nullopt;
    if (requested != "auto") return requested;
    std::ifstream in(path);
    if (!in) throw qkm::DataError("cannot open '" + path.string() + "'");
    std::string header;
    if (!std::getline(in, header)) return std::nullopt;
    std::string cell;
    std::istringstream row(header);
    while (std::getline(row, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        if (cell == "label") return std::string("label");
    }
    return std::nullopt;
}

qkm::Dataset load_input(const std::string& in_path, const std::string& dataset,
                        const std::string& label_column) {
    std::filesystem::path path;
    if (!dataset.empty())
        path = qkm::find_bundled_dataset(dataset);
    else if (!in_path.empty())
        path = in_path;
    else
        throw qkm::PreconditionError("either --in or --dataset is required");
    return qkm::load_csv(path, resolve_label_column(path, label_column));
}

qkm::Dataset select_features(const qkm::Dataset& data, const std::vector<int>& features) {
    if (features.empty()) return data;
    qkm::Dataset out = data;
    out.features = data.features.select_columns(features);
    out.feature_names.clear();
    for (int c : features)
        out.feature_names.push_back(static_cast<std::size_t>(c) < data.feature_names.size()
                                        ? data.feature_names[static_cast<std::size_t>(c)]
                                        : "f" + std::to_string(c));
    return out;
}

qkm::ScaleTarget parse_scale(const std::string& name) {
    if (name == "none") return qkm::ScaleTarget::none;
    if (name == "unit") return qkm::ScaleTarget::unit_interval;
    if (name == "angle") return qkm::ScaleTarget::angle_interval;
    if (name == "standardize") return qkm::ScaleTarget::standardize;
    throw qkm::PreconditionError("unknown scale target '" + name + "'");
}

void write_table_csv(const qkm::Dataset& data, const std::vector<int>& extra,
                     const std::string& extra_name, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw qkm::DataError("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < data.dimension(); ++c) {
        if (c) out << ',';
        out << (c < data.feature_names.size() ? data.feature_names[c]
                                              : "f" + std::to_string(c));
    }
    if (data.labels) out << ",label";
    out << ',' << extra_name << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t c = 0; c < data.dimension(); ++c) {
            if (c) out << ',';
            out << fmt(data.features.at(i, c));
        }
        if (data.labels) out << ',' << (*data.labels)[i];
        out << ',' << extra[i] << '\n';
    }
    if (!out) throw qkm::DataError("write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------- gen-blobs

struct GenBlobsArgs {
    qkm::BlobSpec spec;
    std::string out;
    std::string config;
};

int run_gen_blobs(CLI::App* cmd, GenBlobsArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);
    qkm::Dataset data = qkm::make_blobs(a.spec);
    qkm::save_csv(data, a.out);

    json side;
    side["command"] = "gen-blobs";
    side["n"] = a.spec.n_points;
    side["dims"] = a.spec.dims;
    side["k"] = a.spec.k_clusters;
    side["std"] = a.spec.stddev;
    side["mean-low"] = a.spec.mean_low;
    side["mean-high"] = a.spec.mean_high;
    side["seed"] = a.spec.seed;
    side["out"] = a.out;
    std::filesystem::path side_path(a.out);
    side_path.replace_extension(".json");
    std::ofstream out(side_path, std::ios::trunc);
    if (!out) throw qkm::DataError("cannot write '" + side_path.string() + "'");
    out << side.dump(2) << '\n';

    std::printf("wrote %s (%zu rows)\n", a.out.c_str(), data.size());
    return 0;
}

// ------------------------------------------------------------------ cluster

struct ClusterArgs {
    std::string in;
    std::string dataset;
    std::string label_column = "auto";
    std::vector<int> features;
    int k = 3;
    std::string distance = "classical";
    int shots = 100000;
    double epsilon = -1.0; // sentinel: 0 for exact modes, 0.02 for shots
    int max_iterations = 100;
    std::string init = "random";
    int restarts = 1;
    std::uint64_t seed = 0;
    std::string scale = "none";
    double shift = 0.0;
    std::string out;
    std::string trace;
    bool timings = false;
    std::string config;
};

int run_cluster(CLI::App* cmd, ClusterArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);

    qkm::DistanceMode mode;
    if (a.distance == "classical")
        mode = qkm::DistanceMode::classical;
    else if (a.distance == "quantum-exact")
        mode = qkm::DistanceMode::quantum_exact;
    else if (a.distance == "quantum-shots")
        mode = qkm::DistanceMode::quantum_shots;
    else
        throw qkm::PreconditionError("unknown distance mode '" + a.distance + "'");

    double epsilon = a.epsilon;
    if (epsilon < 0.0) epsilon = mode == qkm::DistanceMode::quantum_shots ? 0.02 : 0.0;

    qkm::Dataset data = select_features(load_input(a.in, a.dataset, a.label_column), a.features);
    qkm::FittedScaler scaler = qkm::fit_scaler(data.features, parse_scale(a.scale));
    qkm::Matrix points = scaler.apply(data.features);
    for (double& v : points.values) v += a.shift;

    qkm::KMeansConfig config;
    config.k = a.k;
    config.distance.mode = mode;
    config.distance.shots = a.shots;
    config.distance.master_seed = a.seed;
    config.max_iterations = a.max_iterations;
    config.reassignment_fraction_epsilon = epsilon;
    config.init = a.init == "kmeans++" ? qkm::KMeansInit::kmeanspp : qkm::KMeansInit::random_points;
    config.restarts = a.restarts;
    config.seed = a.seed;

    auto started = std::chrono::steady_clock::now();
    qkm::ClusterModel model = qkm::kmeans_fit(points, config);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!a.out.empty()) write_table_csv(data, model.assignments, "cluster", a.out);

    std::optional<double> accuracy;
    if (data.labels) accuracy = qkm::cluster_accuracy(model.assignments, *data.labels);

    if (!a.trace.empty()) {
        json t;
        t["command"] = "cluster";
        t["k"] = a.k;
        t["distance"] = a.distance;
        t["shots"] = a.shots;
        t["epsilon"] = epsilon;
        t["max-iterations"] = a.max_iterations;
        t["init"] = a.init;
        t["restarts"] = a.restarts;
        t["seed"] = a.seed;
        t["scale"] = a.scale;
        t["shift"] = a.shift;
        t["iterations"] = model.iterations_run;
        t["converged"] = model.converged;
        t["wcss"] = model.wcss;
        t["wcss-trace"] = model.wcss_trace;
        t["reassigned-fraction-trace"] = model.reassigned_fraction_trace;
        if (accuracy) t["accuracy"] = *accuracy;
        if (a.timings) t["wall-seconds"] = elapsed;
        std::ofstream out(a.trace, std::ios::trunc);
        if (!out) throw qkm::DataError("cannot write '" + a.trace + "'");
        out << t.dump(2) << '\n';
    }

    std::printf("iterations %d\n", model.iterations_run);
    std::printf("converged %s\n", model.converged ? "true" : "false");
    std::printf("wcss %s\n", fmt(model.wcss, "%.12g").c_str());
    if (accuracy) std::printf("accuracy %s\n", fmt(*accuracy, "%.4f").c_str());
    if (a.timings) std::printf("wall-seconds %s\n", fmt(elapsed, "%.3f").c_str());

    return model.converged ? 0 : kExitNoConvergence;
}

// -------------------------------------------------------------------- svm

struct SvmArgs {
    std::string train;
    std::string test;
    std::string dataset;
    std::string label_column = "auto";
    std::vector<int> features;
    std::string kernel = "rbf";
    std::string scale = "auto";
    double gamma = 0.0; // 0: heuristic
    std::string mode = "exact";
    int shots = 100000;
    std::string gram_path;
    double c = 1.0;
    double tolerance = 1e-3;
    int max_passes = 200;
    std::uint64_t seed = 0;
    std::string out;
    std::string model_out;
    bool timings = false;
    std::string config;
};

int run_svm(CLI::App* cmd, SvmArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);
    if (a.kernel != "rbf" && a.kernel != "quantum" && a.kernel != "precomputed")
        throw qkm::PreconditionError("unknown kernel '" + a.kernel + "'");
    qkm::EstimationMode kmode =
        a.mode == "shots" ? qkm::EstimationMode::shots : qkm::EstimationMode::exact;

    qkm::SvmParams params;
    params.regularization_c = a.c;
    params.tolerance = a.tolerance;
    params.max_passes = a.max_passes;
    params.seed = a.seed;

    auto started = std::chrono::steady_clock::now();

    qkm::OvrModel model;
    std::vector<int> predictions;
    qkm::Dataset eval; // rows the predictions correspond to
    double gamma_used = 0.0;
    json kernel_spec;

    if (a.kernel == "precomputed") {
        if (a.gram_path.empty())
            throw qkm::PreconditionError("--gram is required with --kernel precomputed");
        if (a.train.empty())
            throw qkm::PreconditionError("--train (labels for the gram rows) is required");
        qkm::KernelGram gram = qkm::load_gram(a.gram_path);
        qkm::Dataset train = load_input(a.train, a.dataset, a.label_column);
        if (!train.labels) throw qkm::DataError("training data has no label column");
        if (train.size() != gram.matrix.rows)
            throw qkm::ShapeError("gram size does not match training rows");
        model = qkm::fit_ovr(gram.matrix, *train.labels, params);
        predictions = qkm::predict_ovr(model, gram.matrix);
        eval = train;
        kernel_spec = {{"kernel", "precomputed"},
                       {"gram", a.gram_path},
                       {"mode", gram.mode == qkm::EstimationMode::shots ? "shots" : "exact"},
                       {"shots", gram.shots}};
    } else {
        qkm::Dataset train =
            select_features(load_input(a.train, a.dataset, a.label_column), a.features);
        if (!train.labels) throw qkm::DataError("training data has no label column");
        qkm::Dataset test = a.test.empty()
                                ? train
                                : select_features(qkm::load_csv(a.test, resolve_label_column(
                                                                            a.test, a.label_column)),
                                                  a.features);
        if (train.dimension() != test.dimension())
            throw qkm::ShapeError("train and test dimension mismatch");

        std::string scale_name = a.scale;
        if (scale_name == "auto") scale_name = a.kernel == "quantum" ? "angle" : "none";
        qkm::FittedScaler scaler = qkm::fit_scaler(train.features, parse_scale(scale_name));
        qkm::Matrix train_x = scaler.apply(train.features);
        qkm::Matrix test_x = scaler.apply(test.features);

        qkm::Matrix gram, cross;
        if (a.kernel == "rbf") {
            gamma_used = a.gamma > 0.0 ? a.gamma : qkm::default_rbf_gamma(train_x);
            gram = qkm::rbf_kernel(train_x, train_x, gamma_used);
            cross = qkm::rbf_kernel(test_x, train_x, gamma_used);
            kernel_spec = {{"kernel", "rbf"}, {"gamma", gamma_used}, {"scale", scale_name}};
        } else {
            gram = qkm::kernel_gram(train_x, kmode, a.shots, qkm::derive_seed(a.seed, 9, 0, 0))
                       .matrix;
            cross = qkm::kernel_cross(test_x, train_x, kmode, a.shots,
                                      qkm::derive_seed(a.seed, 9, 1, 0));
            kernel_spec = {{"kernel", "quantum"},
                           {"mode", a.mode},
                           {"shots", kmode == qkm::EstimationMode::shots ? a.shots : 0},
                           {"scale", scale_name}};
        }
        model = qkm::fit_ovr(gram, *train.labels, params);
        predictions = qkm::predict_ovr(model, cross);
        eval = test;
    }

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!a.out.empty()) write_table_csv(eval, predictions, "predicted", a.out);

    std::optional<double> accuracy;
    if (eval.labels) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < predictions.size(); ++i)
            if (predictions[i] == (*eval.labels)[i]) ++hits;
        accuracy = static_cast<double>(hits) / static_cast<double>(predictions.size());
    }

    if (!a.model_out.empty()) {
        json m;
        m["command"] = "svm";
        m["kernel-spec"] = kernel_spec;
        m["classes"] = model.classes;
        m["converged"] = model.converged;
        m["c"] = a.c;
        m["tolerance"] = a.tolerance;
        m["max-passes"] = a.max_passes;
        m["seed"] = a.seed;
        json per_class = json::array();
        for (const auto& s : model.models) {
            json b;
            b["alphas"] = s.alphas;
            b["bias"] = s.bias;
            b["support-indices"] = s.support_indices;
            b["converged"] = s.converged;
            b["passes"] = s.passes_used;
            b["jitter"] = s.jitter;
            per_class.push_back(std::move(b));
        }
        m["models"] = std::move(per_class);
        if (accuracy) m["accuracy"] = *accuracy;
        if (a.timings) m["wall-seconds"] = elapsed;
        std::ofstream out(a.model_out, std::ios::trunc);
        if (!out) throw qkm::DataError("cannot write '" + a.model_out + "'");
        out << m.dump(2) << '\n';
    }

    std::printf("converged %s\n", model.converged ? "true" : "false");
    if (accuracy) std::printf("accuracy %s\n", fmt(*accuracy, "%.4f").c_str());
    if (a.timings) std::printf("wall-seconds %s\n", fmt(elapsed, "%.3f").c_str());

    return model.converged ? 0 : kExitNoConvergence;
}

// -------------------------------------------------------------------- gram

struct GramArgs {
    std::string in;
    std::string dataset;
    std::string label_column = "auto";
    std::vector<int> features;
    std::string scale = "angle";
    std::string mode = "exact";
    int shots = 100000;
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
};

int run_gram(CLI::App* cmd, GramArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);
    qkm::Dataset data = select_features(load_input(a.in, a.dataset, a.label_column), a.features);
    qkm::Matrix points = qkm::fit_scaler(data.features, parse_scale(a.scale)).apply(data.features);
    qkm::EstimationMode mode =
        a.mode == "shots" ? qkm::EstimationMode::shots : qkm::EstimationMode::exact;
    qkm::KernelGram gram = qkm::kernel_gram(points, mode, a.shots, a.seed);
    qkm::save_gram(gram, a.out);
    std::printf("wrote %s (%zux%zu, %s)\n", a.out.c_str(), gram.matrix.rows, gram.matrix.cols,
                a.mode.c_str());
    return 0;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
    std::string dataset;
    std::string in;
    std::string label_column = "auto";
    int trials = 5;
    std::size_t n_train = 30;
    std::size_t n_test = 30;
    std::vector<int> features = {0, 1};
    bool no_stratify = false;
    std::uint64_t seed = 0;
    std::string kernel_mode = "shots";
    int kernel_shots = 100000;
    std::string distance = "quantum-shots";
    int kmeans_shots = 100000;
    double epsilon = 0.02;
    int restarts = 10;
    int max_iterations = 100;
    double c = 1.0;
    double tolerance = 1e-3;
    int max_passes = 200;
    std::size_t blob_n = 120;
    std::size_t blob_dims = 2;
    int blob_k = 3;
    double blob_std = 1.0;
    std::uint64_t blob_seed = 0;
    std::string json_out;
    bool timings = false;
    std::string config;
};

int run_benchmark_cmd(CLI::App* cmd, BenchmarkArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);

    qkm::Dataset data;
    if (a.dataset == "blobs") {
        qkm::BlobSpec spec;
        spec.n_points = a.blob_n;
        spec.dims = a.blob_dims;
        spec.k_clusters = a.blob_k;
        spec.stddev = a.blob_std;
        spec.seed = a.blob_seed;
        data = qkm::make_blobs(spec);
    } else if (!a.dataset.empty() || !a.in.empty()) {
        data = load_input(a.in, a.dataset, a.label_column);
    } else {
        throw qkm::PreconditionError("--dataset {wine,iris,blobs} or --in is required");
    }

    qkm::bench::BenchmarkConfig config;
    config.trials = a.trials;
    config.n_train = a.n_train;
    config.n_test = a.n_test;
    config.feature_indices = a.features;
    config.stratified = !a.no_stratify;
    config.seed = a.seed;
    config.kernel_mode = a.kernel_mode == "exact" ? qkm::EstimationMode::exact
                                                  : qkm::EstimationMode::shots;
    config.kernel_shots = a.kernel_shots;
    if (a.distance == "classical")
        config.kmeans_distance = qkm::DistanceMode::classical;
    else if (a.distance == "quantum-exact")
        config.kmeans_distance = qkm::DistanceMode::quantum_exact;
    else if (a.distance == "quantum-shots")
        config.kmeans_distance = qkm::DistanceMode::quantum_shots;
    else
        throw qkm::PreconditionError("unknown distance mode '" + a.distance + "'");
    config.kmeans_shots = a.kmeans_shots;
    config.shots_epsilon = a.epsilon;
    config.kmeans_restarts = a.restarts;
    config.kmeans_max_iterations = a.max_iterations;
    config.svm.regularization_c = a.c;
    config.svm.tolerance = a.tolerance;
    config.svm.max_passes = a.max_passes;

    qkm::bench::BenchmarkReport report = qkm::bench::run_benchmark(data, config);

    std::string source = !a.dataset.empty() ? a.dataset : a.in;
    std::printf("Dataset: %s (%zu rows, %zu features, %d classes)\n", source.c_str(),
                data.size(), data.dimension(), data.num_classes());
    std::string feat;
    for (std::size_t i = 0; i < a.features.size(); ++i) {
        if (i) feat += ",";
        feat += std::to_string(a.features[i]);
    }
    std::printf("Trials: %d   Train/Test: %zu/%zu   Features: %s   Seed: %llu\n\n",
                a.trials, a.n_train, a.n_test, feat.c_str(),
                static_cast<unsigned long long>(a.seed));
    std::printf("%-18s %-8s %s\n", "Algorithm", "Mean", "Trial accuracies");
    std::printf("%-18s %-8s %s\n", "------------------", "--------", "----------------");
    for (int alg = 0; alg < qkm::bench::kAlgorithmCount; ++alg) {
        auto ua = static_cast<std::size_t>(alg);
        std::string row;
        for (int t = 0; t < report.trials; ++t) {
            if (t) row += ' ';
            row += fmt(report.accuracy.at(ua, static_cast<std::size_t>(t)), "%.4f");
        }
        std::printf("%-18s %-8s %s\n", report.algorithms[ua].c_str(),
                    fmt(report.means[ua], "%.4f").c_str(), row.c_str());
    }
    if (a.timings) {
        std::printf("\n");
        for (int alg = 0; alg < qkm::bench::kAlgorithmCount; ++alg)
            std::printf("%-18s %s s\n", report.algorithms[static_cast<std::size_t>(alg)].c_str(),
                        fmt(report.wall_seconds[static_cast<std::size_t>(alg)], "%.3f").c_str());
    }

    if (!a.json_out.empty()) {
        json r;
        r["command"] = "benchmark";
        r["dataset"] = source;
        r["trials"] = a.trials;
        r["n-train"] = a.n_train;
        r["n-test"] = a.n_test;
        r["features"] = a.features;
        r["stratified"] = !a.no_stratify;
        r["seed"] = a.seed;
        r["kernel-mode"] = a.kernel_mode;
        r["kernel-shots"] = a.kernel_shots;
        r["distance"] = a.distance;
        r["kmeans-shots"] = a.kmeans_shots;
        r["epsilon"] = a.epsilon;
        r["restarts"] = a.restarts;
        r["max-iterations"] = a.max_iterations;
        r["c"] = a.c;
        r["tolerance"] = a.tolerance;
        r["max-passes"] = a.max_passes;
        json algorithms = json::array();
        for (int alg = 0; alg < qkm::bench::kAlgorithmCount; ++alg) {
            auto ua = static_cast<std::size_t>(alg);
            json entry;
            entry["name"] = report.algorithms[ua];
            entry["mean"] = report.means[ua];
            std::vector<double> accs;
            for (int t = 0; t < report.trials; ++t)
                accs.push_back(report.accuracy.at(ua, static_cast<std::size_t>(t)));
            entry["accuracies"] = accs;
            if (a.timings) entry["wall-seconds"] = report.wall_seconds[ua];
            algorithms.push_back(std::move(entry));
        }
        r["algorithms"] = std::move(algorithms);
        std::ofstream out(a.json_out, std::ios::trunc);
        if (!out) throw qkm::DataError("cannot write '" + a.json_out + "'");
        out << r.dump(2) << '\n';
    }
    return 0;
}

// -------------------------------------------------------------------- plot

struct PlotArgs {
    std::string in;
    int x = 0;
    int y = 1;
    std::string out;
    std::string config;
};

int run_plot(CLI::App* cmd, PlotArgs& a, const Setters& setters) {
    apply_config(cmd, a.config, setters);
    qkm::Dataset data = qkm::load_csv(a.in, std::nullopt);

    int cluster_col = -1;
    int label_col = -1;
    std::vector<int> feature_cols;
    for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
        if (data.feature_names[c] == "cluster")
            cluster_col = static_cast<int>(c);
        else if (data.feature_names[c] == "label")
            label_col = static_cast<int>(c);
        else
            feature_cols.push_back(static_cast<int>(c));
    }
    if (cluster_col < 0) throw qkm::DataError("input has no 'cluster' column");
    if (feature_cols.size() < 2)
        throw qkm::DataError("plot needs at least 2 feature columns");
    if (a.x < 0 || a.y < 0 || static_cast<std::size_t>(a.x) >= feature_cols.size() ||
        static_cast<std::size_t>(a.y) >= feature_cols.size() || a.x == a.y)
        throw qkm::PreconditionError("--x/--y must name distinct feature columns");

    std::vector<int> pair = {feature_cols[static_cast<std::size_t>(a.x)],
                             feature_cols[static_cast<std::size_t>(a.y)]};
    qkm::Matrix xy = data.features.select_columns(pair);

    auto column_groups = [&](int col) {
        std::vector<int> g(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            g[i] = static_cast<int>(data.features.at(i, static_cast<std::size_t>(col)));
        return g;
    };

    std::vector<qkm::cli::PlotPanel> panels;
    if (label_col >= 0)
        panels.push_back({"true labels", column_groups(label_col)});
    panels.push_back({"clusters", column_groups(cluster_col)});

    qkm::cli::write_scatter_svg(
        a.out, xy, panels,
        data.feature_names[static_cast<std::size_t>(pair[0])],
        data.feature_names[static_cast<std::size_t>(pair[1])]);
    std::printf("wrote %s\n", a.out.c_str());
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"hybrid quantum K-means clustering and quantum-kernel SVM toolkit"};
    app.require_subcommand(1);

    GenBlobsArgs gen;
    Setters gen_setters;
    CLI::App* gen_cmd = app.add_subcommand("gen-blobs", "generate a Gaussian blob dataset");
    gen_cmd->add_option("--n", gen.spec.n_points, "number of points")->capture_default_str();
    gen_cmd->add_option("--dims", gen.spec.dims, "feature dimension")->capture_default_str();
    gen_cmd->add_option("--k", gen.spec.k_clusters, "number of clusters")->capture_default_str();
    gen_cmd->add_option("--std", gen.spec.stddev, "cluster standard deviation (> 0)")
        ->capture_default_str();
    gen_cmd->add_option("--mean-low", gen.spec.mean_low, "low end of the centroid mean range")
        ->capture_default_str();
    gen_cmd->add_option("--mean-high", gen.spec.mean_high, "high end of the centroid mean range")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
    gen_cmd->add_option("-o,--out", gen.out, "output CSV path")->required();
    gen_cmd->add_option("--config", gen.config, "JSON config merged under explicit flags");
    bind_key(gen_setters, "n", gen.spec.n_points);
    bind_key(gen_setters, "dims", gen.spec.dims);
    bind_key(gen_setters, "k", gen.spec.k_clusters);
    bind_key(gen_setters, "std", gen.spec.stddev);
    bind_key(gen_setters, "mean-low", gen.spec.mean_low);
    bind_key(gen_setters, "mean-high", gen.spec.mean_high);
    bind_key(gen_setters, "seed", gen.spec.seed);
    bind_key(gen_setters, "out", gen.out);

    ClusterArgs cl;
    Setters cl_setters;
    CLI::App* cl_cmd = app.add_subcommand("cluster", "K-means with a selectable distance backend");
    cl_cmd->add_option("--in", cl.in, "input CSV");
    cl_cmd->add_option("--dataset", cl.dataset, "bundled dataset (wine|iris)");
    cl_cmd->add_option("--label-column", cl.label_column,
                       "label column name, 'auto' or 'none'")
        ->capture_default_str();
    cl_cmd->add_option("--features", cl.features, "feature column indices (default: all)")
        ->delimiter(',');
    cl_cmd->add_option("--k", cl.k, "number of clusters")->capture_default_str();
    cl_cmd->add_option("--distance", cl.distance,
                       "classical | quantum-exact | quantum-shots")
        ->capture_default_str();
    cl_cmd->add_option("--shots", cl.shots, "shots per distance estimate")->capture_default_str();
    cl_cmd->add_option("--epsilon", cl.epsilon,
                       "reassignment fraction at termination (default 0, or 0.02 for shots)");
    cl_cmd->add_option("--max-iterations", cl.max_iterations, "iteration cap")
        ->capture_default_str();
    cl_cmd->add_option("--init", cl.init, "random | kmeans++")->capture_default_str();
    cl_cmd->add_option("--restarts", cl.restarts, "independent restarts, best WCSS wins")
        ->capture_default_str();
    cl_cmd->add_option("--seed", cl.seed, "seed")->capture_default_str();
    cl_cmd->add_option("--scale", cl.scale, "none | unit | angle | standardize")
        ->capture_default_str();
    cl_cmd->add_option("--shift", cl.shift, "constant added to every feature after scaling")
        ->capture_default_str();
    cl_cmd->add_option("-o,--out", cl.out, "assignments CSV path");
    cl_cmd->add_option("--trace", cl.trace, "trace JSON path");
    cl_cmd->add_flag("--timings", cl.timings, "include wall-clock times in outputs");
    cl_cmd->add_option("--config", cl.config, "JSON config merged under explicit flags");
    bind_key(cl_setters, "in", cl.in);
    bind_key(cl_setters, "dataset", cl.dataset);
    bind_key(cl_setters, "label-column", cl.label_column);
    bind_key(cl_setters, "features", cl.features);
    bind_key(cl_setters, "k", cl.k);
    bind_key(cl_setters, "distance", cl.distance);
    bind_key(cl_setters, "shots", cl.shots);
    bind_key(cl_setters, "epsilon", cl.epsilon);
    bind_key(cl_setters, "max-iterations", cl.max_iterations);
    bind_key(cl_setters, "init", cl.init);
    bind_key(cl_setters, "restarts", cl.restarts);
    bind_key(cl_setters, "seed", cl.seed);
    bind_key(cl_setters, "scale", cl.scale);
    bind_key(cl_setters, "shift", cl.shift);
    bind_key(cl_setters, "out", cl.out);
    bind_key(cl_setters, "trace", cl.trace);

    SvmArgs sv;
    Setters sv_setters;
    CLI::App* sv_cmd = app.add_subcommand("svm", "one-against-rest kernel SVM");
    sv_cmd->add_option("--train", sv.train, "training CSV (with labels)");
    sv_cmd->add_option("--test", sv.test, "test CSV; defaults to the training set");
    sv_cmd->add_option("--dataset", sv.dataset, "bundled dataset (wine|iris) as training data");
    sv_cmd->add_option("--label-column", sv.label_column, "label column name, 'auto' or 'none'")
        ->capture_default_str();
    sv_cmd->add_option("--features", sv.features, "feature column indices (default: all)")
        ->delimiter(',');
    sv_cmd->add_option("--kernel", sv.kernel, "rbf | quantum | precomputed")
        ->capture_default_str();
    sv_cmd->add_option("--scale", sv.scale, "auto | none | unit | angle | standardize")
        ->capture_default_str();
    sv_cmd->add_option("--gamma", sv.gamma, "RBF gamma (default: 1/(P*variance))");
    sv_cmd->add_option("--mode", sv.mode, "quantum kernel estimation: exact | shots")
        ->capture_default_str();
    sv_cmd->add_option("--shots", sv.shots, "shots per kernel entry")->capture_default_str();
    sv_cmd->add_option("--gram", sv.gram_path, "precomputed gram CSV");
    sv_cmd->add_option("--c", sv.c, "soft-margin C")->capture_default_str();
    sv_cmd->add_option("--tolerance", sv.tolerance, "KKT tolerance")->capture_default_str();
    sv_cmd->add_option("--max-passes", sv.max_passes, "sweep budget")->capture_default_str();
    sv_cmd->add_option("--seed", sv.seed, "seed")->capture_default_str();
    sv_cmd->add_option("-o,--out", sv.out, "predictions CSV path");
    sv_cmd->add_option("--model-out", sv.model_out, "model JSON path");
    sv_cmd->add_flag("--timings", sv.timings, "include wall-clock times in outputs");
    sv_cmd->add_option("--config", sv.config, "JSON config merged under explicit flags");
    bind_key(sv_setters, "train", sv.train);
    bind_key(sv_setters, "test", sv.test);
    bind_key(sv_setters, "dataset", sv.dataset);
    bind_key(sv_setters, "label-column", sv.label_column);
    bind_key(sv_setters, "features", sv.features);
    bind_key(sv_setters, "kernel", sv.kernel);
    bind_key(sv_setters, "scale", sv.scale);
    bind_key(sv_setters, "gamma", sv.gamma);
    bind_key(sv_setters, "mode", sv.mode);
    bind_key(sv_setters, "shots", sv.shots);
    bind_key(sv_setters, "gram", sv.gram_path);
    bind_key(sv_setters, "c", sv.c);
    bind_key(sv_setters, "tolerance", sv.tolerance);
    bind_key(sv_setters, "max-passes", sv.max_passes);
    bind_key(sv_setters, "seed", sv.seed);
    bind_key(sv_setters, "out", sv.out);
    bind_key(sv_setters, "model-out", sv.model_out);

    GramArgs gr;
    Setters gr_setters;
    CLI::App* gr_cmd = app.add_subcommand("gram", "quantum kernel Gram matrix of a point set");
    gr_cmd->add_option("--in", gr.in, "input CSV");
    gr_cmd->add_option("--dataset", gr.dataset, "bundled dataset (wine|iris)");
    gr_cmd->add_option("--label-column", gr.label_column, "label column name, 'auto' or 'none'")
        ->capture_default_str();
    gr_cmd->add_option("--features", gr.features, "feature column indices (default: all)")
        ->delimiter(',');
    gr_cmd->add_option("--scale", gr.scale, "none | unit | angle | standardize")
        ->capture_default_str();
    gr_cmd->add_option("--mode", gr.mode, "exact | shots")->capture_default_str();
    gr_cmd->add_option("--shots", gr.shots, "shots per kernel entry")->capture_default_str();
    gr_cmd->add_option("--seed", gr.seed, "seed")->capture_default_str();
    gr_cmd->add_option("-o,--out", gr.out, "gram CSV path")->required();
    gr_cmd->add_option("--config", gr.config, "JSON config merged under explicit flags");
    bind_key(gr_setters, "in", gr.in);
    bind_key(gr_setters, "dataset", gr.dataset);
    bind_key(gr_setters, "label-column", gr.label_column);
    bind_key(gr_setters, "features", gr.features);
    bind_key(gr_setters, "scale", gr.scale);
    bind_key(gr_setters, "mode", gr.mode);
    bind_key(gr_setters, "shots", gr.shots);
    bind_key(gr_setters, "seed", gr.seed);
    bind_key(gr_setters, "out", gr.out);

    BenchmarkArgs bm;
    Setters bm_setters;
    CLI::App* bm_cmd = app.add_subcommand(
        "benchmark", "four-algorithm trinary-classification comparison");
    bm_cmd->add_option("--dataset", bm.dataset, "wine | iris | blobs");
    bm_cmd->add_option("--in", bm.in, "labeled CSV instead of a named dataset");
    bm_cmd->add_option("--label-column", bm.label_column, "label column name, 'auto' or 'none'")
        ->capture_default_str();
    bm_cmd->add_option("--trials", bm.trials, "number of trials")->capture_default_str();
    bm_cmd->add_option("--n-train", bm.n_train, "training vectors per trial")
        ->capture_default_str();
    bm_cmd->add_option("--n-test", bm.n_test, "test vectors per trial")->capture_default_str();
    bm_cmd->add_option("--features", bm.features, "feature column indices")
        ->delimiter(',')
        ->capture_default_str();
    bm_cmd->add_flag("--no-stratify", bm.no_stratify, "sample splits without class balancing");
    bm_cmd->add_option("--seed", bm.seed, "master seed")->capture_default_str();
    bm_cmd->add_option("--kernel-mode", bm.kernel_mode, "exact | shots")->capture_default_str();
    bm_cmd->add_option("--kernel-shots", bm.kernel_shots, "shots per kernel entry")
        ->capture_default_str();
    bm_cmd->add_option("--distance", bm.distance,
                       "quantum K-means distance backend: classical | quantum-exact | "
                       "quantum-shots")
        ->capture_default_str();
    bm_cmd->add_option("--kmeans-shots", bm.kmeans_shots, "shots per distance estimate")
        ->capture_default_str();
    bm_cmd->add_option("--epsilon", bm.epsilon, "reassignment slack in shots mode")
        ->capture_default_str();
    bm_cmd->add_option("--restarts", bm.restarts, "K-means restarts")->capture_default_str();
    bm_cmd->add_option("--max-iterations", bm.max_iterations, "K-means iteration cap")
        ->capture_default_str();
    bm_cmd->add_option("--c", bm.c, "soft-margin C")->capture_default_str();
    bm_cmd->add_option("--tolerance", bm.tolerance, "KKT tolerance")->capture_default_str();
    bm_cmd->add_option("--max-passes", bm.max_passes, "SMO sweep budget")->capture_default_str();
    bm_cmd->add_option("--blob-n", bm.blob_n, "blobs: number of points")->capture_default_str();
    bm_cmd->add_option("--blob-dims", bm.blob_dims, "blobs: dimension")->capture_default_str();
    bm_cmd->add_option("--blob-k", bm.blob_k, "blobs: clusters")->capture_default_str();
    bm_cmd->add_option("--blob-std", bm.blob_std, "blobs: standard deviation")
        ->capture_default_str();
    bm_cmd->add_option("--blob-seed", bm.blob_seed, "blobs: generator seed")
        ->capture_default_str();
    bm_cmd->add_option("--json", bm.json_out, "report JSON path");
    bm_cmd->add_flag("--timings", bm.timings, "include wall-clock times in outputs");
    bm_cmd->add_option("--config", bm.config, "JSON config merged under explicit flags");
    bind_key(bm_setters, "dataset", bm.dataset);
    bind_key(bm_setters, "in", bm.in);
    bind_key(bm_setters, "label-column", bm.label_column);
    bind_key(bm_setters, "trials", bm.trials);
    bind_key(bm_setters, "n-train", bm.n_train);
    bind_key(bm_setters, "n-test", bm.n_test);
    bind_key(bm_setters, "features", bm.features);
    bind_key(bm_setters, "no-stratify", bm.no_stratify);
    bind_key(bm_setters, "seed", bm.seed);
    bind_key(bm_setters, "kernel-mode", bm.kernel_mode);
    bind_key(bm_setters, "kernel-shots", bm.kernel_shots);
    bind_key(bm_setters, "distance", bm.distance);
    bind_key(bm_setters, "kmeans-shots", bm.kmeans_shots);
    bind_key(bm_setters, "epsilon", bm.epsilon);
    bind_key(bm_setters, "restarts", bm.restarts);
    bind_key(bm_setters, "max-iterations", bm.max_iterations);
    bind_key(bm_setters, "c", bm.c);
    bind_key(bm_setters, "tolerance", bm.tolerance);
    bind_key(bm_setters, "max-passes", bm.max_passes);
    bind_key(bm_setters, "blob-n", bm.blob_n);
    bind_key(bm_setters, "blob-dims", bm.blob_dims);
    bind_key(bm_setters, "blob-k", bm.blob_k);
    bind_key(bm_setters, "blob-std", bm.blob_std);
    bind_key(bm_setters, "blob-seed", bm.blob_seed);
    bind_key(bm_setters, "json", bm.json_out);

    PlotArgs pl;
    Setters pl_setters;
    CLI::App* pl_cmd = app.add_subcommand("plot", "SVG scatter of an assignments CSV");
    pl_cmd->add_option("--in", pl.in, "assignments CSV (needs a 'cluster' column)")->required();
    pl_cmd->add_option("--x", pl.x, "feature column index for the x axis")
        ->capture_default_str();
    pl_cmd->add_option("--y", pl.y, "feature column index for the y axis")
        ->capture_default_str();
    pl_cmd->add_option("-o,--out", pl.out, "output SVG path")->required();
    pl_cmd->add_option("--config", pl.config, "JSON config merged under explicit flags");
    bind_key(pl_setters, "in", pl.in);
    bind_key(pl_setters, "x", pl.x);
    bind_key(pl_setters, "y", pl.y);
    bind_key(pl_setters, "out", pl.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (app.got_subcommand(gen_cmd)) return run_gen_blobs(gen_cmd, gen, gen_setters);
    if (app.got_subcommand(cl_cmd)) return run_cluster(cl_cmd, cl, cl_setters);
    if (app.got_subcommand(sv_cmd)) return run_svm(sv_cmd, sv, sv_setters);
    if (app.got_subcommand(gr_cmd)) return run_gram(gr_cmd, gr, gr_setters);
    if (app.got_subcommand(bm_cmd)) return run_benchmark_cmd(bm_cmd, bm, bm_setters);
    if (app.got_subcommand(pl_cmd)) return run_plot(pl_cmd, pl, pl_setters);
    return kExitUsage;
}

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qkm::ParseError& e) {
        std::fprintf(stderr, "qkm: %s\n", e.what());
        return kExitDataError;
    } catch (const qkm::DataError& e) {
        std::fprintf(stderr, "qkm: %s\n", e.what());
        return kExitDataError;
    } catch (const qkm::DegenerateInputError& e) {
        std::fprintf(stderr, "qkm: %s\n", e.what());
        return kExitDataError;
    } catch (const qkm::Error& e) {
        std::fprintf(stderr, "qkm: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qkm: unexpected error: %s\n", e.what());
        return 1;
    }
}
