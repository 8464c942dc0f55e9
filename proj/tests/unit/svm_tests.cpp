#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "qkm/errors.hpp"
#include "qkm/rng.hpp"
#include "qkm/svm.hpp"

using qkm::DualSolution;
using qkm::Matrix;
using qkm::SvmParams;

namespace {

// Two Gaussian lumps at +-(offset, offset); labels +1 / -1.
Matrix blob_pair(int per_class, double offset, double stddev, std::uint64_t seed,
                 std::vector<int>& labels) {
    qkm::SplitMix64 rng(seed);
    Matrix m(2 * per_class, 2);
    labels.clear();
    for (int i = 0; i < 2 * per_class; ++i) {
        const int sign = i < per_class ? 1 : -1;
        m.at(i, 0) = sign * offset + stddev * rng.next_normal();
        m.at(i, 1) = sign * offset + stddev * rng.next_normal();
        labels.push_back(sign);
    }
    return m;
}

Matrix identity_gram(std::size_t n) {
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) g.at(i, i) = 1.0;
    return g;
}

} // namespace

TEST_CASE("solve_dual solves the two-point orthogonal problem exactly") {
    // K = I, labels (+1, -1): the dual reduces to max 2a - a^2 with
    // alpha_1 = alpha_2 = a, so a = 1, and the bias vanishes by symmetry.
    const auto gram = identity_gram(2);
    const std::vector<int> labels{1, -1};
    SvmParams params;
    params.regularization_c = 2.0;  // keeps the optimum interior
    const auto model = qkm::solve_dual(gram, labels, params);
    CHECK(model.converged);
    CHECK(model.alphas[0] == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(model.alphas[1] == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(model.bias == doctest::Approx(0.0).epsilon(5e-3));
    CHECK(model.support_indices.size() == 2);

    // Decision values on the training points keep the label signs.
    CHECK(qkm::decision_function(model, gram.row(0)) > 0.0);
    CHECK(qkm::decision_function(model, gram.row(1)) < 0.0);
}

TEST_CASE("solve_dual handles a single-class degenerate problem") {
    const auto gram = identity_gram(3);
    const std::vector<int> plus{1, 1, 1};
    const auto up = qkm::solve_dual(gram, plus);
    CHECK(up.converged);
    for (double a : up.alphas) CHECK(a == 0.0);
    CHECK(qkm::decision_function(up, gram.row(0)) > 0.0);

    const std::vector<int> minus{-1, -1, -1};
    const auto down = qkm::solve_dual(gram, minus);
    CHECK(qkm::decision_function(down, gram.row(1)) < 0.0);
}

TEST_CASE("solve_dual separates clean blobs with the RBF kernel") {
    std::vector<int> labels;
    const auto points = blob_pair(10, 3.0, 0.5, 99, labels);
    const double gamma = qkm::default_rbf_gamma(points);
    const auto gram = qkm::rbf_kernel(points, points, gamma);
    const auto model = qkm::solve_dual(gram, labels);
    CHECK(model.converged);
    CHECK(model.jitter == 0.0);
    for (std::size_t i = 0; i < points.rows; ++i) {
        const double score = qkm::decision_function(model, gram.row(i));
        CHECK(score * labels[i] > 0.0);
    }
}

TEST_CASE("converged solutions satisfy the dual constraints") {
    std::vector<int> labels;
    const auto points = blob_pair(12, 2.0, 1.0, 1234, labels);
    const double gamma = qkm::default_rbf_gamma(points);
    const auto gram = qkm::rbf_kernel(points, points, gamma);
    SvmParams params;
    params.regularization_c = 1.5;
    const auto model = qkm::solve_dual(gram, labels, params);
    REQUIRE(model.converged);

    double balance = 0.0;
    for (std::size_t i = 0; i < model.alphas.size(); ++i) {
        CHECK(model.alphas[i] >= 0.0);
        CHECK(model.alphas[i] <= params.regularization_c);
        balance += model.alphas[i] * labels[i];
    }
    CHECK(std::abs(balance) <= 1e-6);

    // Non-bound support vectors sit on the margin.
    for (std::size_t i : model.support_indices) {
        const double a = model.alphas[i];
        if (a > 1e-9 && a < params.regularization_c - 1e-9) {
            const double margin = labels[i] * qkm::decision_function(model, gram.row(i));
            CHECK(std::abs(margin - 1.0) <= 2.0 * params.tolerance);
        }
    }

    // support_indices lists exactly the nonzero alphas.
    for (std::size_t i : model.support_indices) CHECK(model.alphas[i] > 1e-9);
}

TEST_CASE("objective trace is nondecreasing") {
    std::vector<int> labels;
    const auto points = blob_pair(15, 1.5, 1.2, 777, labels);
    const auto gram = qkm::rbf_kernel(points, points, qkm::default_rbf_gamma(points));
    const auto model = qkm::solve_dual(gram, labels);
    REQUIRE(model.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
        CHECK(model.objective_trace[i] >= model.objective_trace[i - 1] - 1e-9);
    CHECK(model.objective_trace.back() ==
          doctest::Approx(qkm::dual_objective(gram, model)).epsilon(1e-9));
}

TEST_CASE("solve_dual is deterministic and order-stable on clean data") {
    std::vector<int> labels;
    const auto points = blob_pair(10, 3.0, 0.4, 31, labels);
    const auto gram = qkm::rbf_kernel(points, points, qkm::default_rbf_gamma(points));
    const auto a = qkm::solve_dual(gram, labels);
    const auto b = qkm::solve_dual(gram, labels);
    CHECK(a.alphas == b.alphas);
    CHECK(a.bias == b.bias);

    // Reverse the training order; predictions must be unchanged.
    const std::size_t n = points.rows;
    Matrix rgram(n, n);
    std::vector<int> rlabels(n);
    for (std::size_t i = 0; i < n; ++i) {
        rlabels[i] = labels[n - 1 - i];
        for (std::size_t j = 0; j < n; ++j)
            rgram.at(i, j) = gram.at(n - 1 - i, n - 1 - j);
    }
    const auto rmodel = qkm::solve_dual(rgram, rlabels);
    for (std::size_t t = 0; t < n; ++t) {
        const double forward = qkm::decision_function(a, gram.row(t));
        std::vector<double> reversed_row(n);
        for (std::size_t j = 0; j < n; ++j) reversed_row[j] = gram.at(n - 1 - j, t);
        const double backward = qkm::decision_function(rmodel, reversed_row);
        CHECK((forward > 0) == (backward > 0));
    }
}

TEST_CASE("solve_dual validates inputs") {
    const auto gram = identity_gram(2);
    CHECK_THROWS_AS(qkm::solve_dual(gram, std::vector<int>{1, 2}),
                    qkm::PreconditionError);
    CHECK_THROWS_AS(qkm::solve_dual(gram, std::vector<int>{1}), qkm::ShapeError);
    Matrix rect(2, 3);
    CHECK_THROWS_AS(qkm::solve_dual(rect, std::vector<int>{1, -1}), qkm::ShapeError);

    Matrix bad = identity_gram(2);
    bad.at(0, 1) = std::nan("");
    CHECK_THROWS_AS(qkm::solve_dual(bad, std::vector<int>{1, -1}), qkm::DataError);

    SvmParams params;
    params.regularization_c = 0.0;
    CHECK_THROWS_AS(qkm::solve_dual(gram, std::vector<int>{1, -1}, params),
                    qkm::PreconditionError);
    params.regularization_c = 1.0;
    params.max_passes = 0;
    CHECK_THROWS_AS(qkm::solve_dual(gram, std::vector<int>{1, -1}, params),
                    qkm::PreconditionError);
}

TEST_CASE("decision_function is the weighted kernel sum plus bias") {
    DualSolution model;
    model.alphas = {0.5, 0.0, 1.25};
    model.labels = {1, -1, -1};
    model.bias = 0.7;
    const std::vector<double> row{0.9, 0.4, 0.2};
    const double expect = 0.5 * 1 * 0.9 + 0.0 + 1.25 * (-1) * 0.2 + 0.7;
    CHECK(qkm::decision_function(model, row) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(qkm::decision_function(model, std::vector<double>{1.0}),
                    qkm::ShapeError);
}

TEST_CASE("fit_ovr trains one model per class and predicts by argmax") {
    // Three tight lumps on a line; RBF kernel separates them easily.
    qkm::SplitMix64 rng(2468);
    const int per_class = 8;
    Matrix points(3 * per_class, 2);
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < per_class; ++i) {
            const int r = c * per_class + i;
            points.at(r, 0) = 6.0 * c + 0.3 * rng.next_normal();
            points.at(r, 1) = 0.3 * rng.next_normal();
            labels.push_back(c);
        }
    const double gamma = qkm::default_rbf_gamma(points);
    const auto gram = qkm::rbf_kernel(points, points, gamma);
    const auto model = qkm::fit_ovr(gram, labels);
    CHECK(model.classes == 3);
    CHECK(model.models.size() == 3);
    CHECK(model.converged);

    const auto self_rows = qkm::rbf_kernel(points, points, gamma);
    const auto predictions = qkm::predict_ovr(model, self_rows);
    REQUIRE(predictions.size() == labels.size());
    int hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
    CHECK(hits == int(labels.size()));
}

TEST_CASE("two-class OvR agrees with the binary solver") {
    std::vector<int> pm_labels;
    const auto points = blob_pair(10, 2.5, 0.6, 4321, pm_labels);
    const auto gram = qkm::rbf_kernel(points, points, qkm::default_rbf_gamma(points));

    std::vector<int> dense(pm_labels.size());
    for (std::size_t i = 0; i < pm_labels.size(); ++i) dense[i] = pm_labels[i] > 0 ? 1 : 0;

    const auto binary = qkm::solve_dual(gram, pm_labels);
    const auto ovr = qkm::fit_ovr(gram, dense);
    const auto predictions = qkm::predict_ovr(ovr, gram);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        const int from_binary = qkm::decision_function(binary, gram.row(i)) > 0 ? 1 : 0;
        CHECK(predictions[i] == from_binary);
    }
}

TEST_CASE("fit_ovr validates the label set") {
    const auto gram = identity_gram(4);
    CHECK_THROWS_AS(qkm::fit_ovr(gram, std::vector<int>{0, 0, 0, 0}), qkm::DataError);
    CHECK_THROWS_AS(qkm::fit_ovr(gram, std::vector<int>{0, 1, 3, 3}), qkm::DataError);
    CHECK_THROWS_AS(qkm::fit_ovr(gram, std::vector<int>{0, -1, 1, 1}),
                    qkm::PreconditionError);
}

TEST_CASE("predict_ovr on an empty block returns no predictions") {
    const auto gram = identity_gram(4);
    const std::vector<int> labels{0, 1, 0, 1};
    const auto model = qkm::fit_ovr(gram, labels);
    Matrix empty(0, 4);
    CHECK(qkm::predict_ovr(model, empty).empty());
}

TEST_CASE("rbf_kernel matches the closed form and gamma heuristic") {
    Matrix a(1, 2), b(1, 2);
    a.at(0, 0) = 1.0;
    a.at(0, 1) = 2.0;
    b.at(0, 0) = 4.0;
    b.at(0, 1) = 6.0;
    const auto k = qkm::rbf_kernel(a, b, 0.1);
    CHECK(k.at(0, 0) == doctest::Approx(std::exp(-0.1 * 25.0)).epsilon(1e-12));

    // Variance of {0, 2} entries is 1, two columns: gamma = 1/2.
    Matrix m(2, 2);
    m.at(0, 0) = 0.0;
    m.at(0, 1) = 2.0;
    m.at(1, 0) = 2.0;
    m.at(1, 1) = 0.0;
    CHECK(qkm::default_rbf_gamma(m) == doctest::Approx(0.5).epsilon(1e-12));

    Matrix constant(3, 4, 1.5);
    CHECK(qkm::default_rbf_gamma(constant) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("shot-noise grams still converge, possibly with jitter") {
    // Perturb a clean PSD gram the way binomial sampling would.
    std::vector<int> labels;
    const auto points = blob_pair(10, 2.0, 0.8, 55, labels);
    auto gram = qkm::rbf_kernel(points, points, qkm::default_rbf_gamma(points));
    qkm::SplitMix64 noise(3);
    for (std::size_t i = 0; i < gram.rows; ++i)
        for (std::size_t j = i + 1; j < gram.cols; ++j) {
            const double bump = (noise.next_double() - 0.5) * 0.02;
            gram.at(i, j) += bump;
            gram.at(j, i) = gram.at(i, j);
        }
    const auto model = qkm::solve_dual(gram, labels);
    CHECK(model.converged);
    CHECK(model.jitter >= 0.0);
    int correct = 0;
    for (std::size_t i = 0; i < gram.rows; ++i)
        correct += (qkm::decision_function(model, gram.row(i)) > 0) == (labels[i] > 0);
    CHECK(correct >= int(gram.rows) - 2);
}
