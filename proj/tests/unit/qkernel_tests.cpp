#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "qkm/errors.hpp"
#include "qkm/qkernel.hpp"
#include "qkm/rng.hpp"
#include "qkm/statevec.hpp"

using qkm::Complex;
using qkm::EstimationMode;
using qkm::Mat4;
using qkm::Matrix;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool approx_identity(const Mat4& m, double tol) {
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const Complex want = r == c ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(m[4 * r + c] - want) > tol) return false;
        }
    return true;
}

Mat4 dagger_product(const Mat4& m) {
    Mat4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Complex s = 0.0;
            for (int k = 0; k < 4; ++k) s += std::conj(m[4 * k + r]) * m[4 * k + c];
            out[4 * r + c] = s;
        }
    return out;
}

// Kernel value computed through the generic statevector simulator with a
// swap test over two feature-map registers. Independent of the dense 4x4
// route used by kernel_entry.
double kernel_via_swap_test(std::array<double, 2> x, std::array<double, 2> z) {
    auto load = [](const qkm::State4& amps) {
        std::vector<Complex> v(amps.begin(), amps.end());
        return qkm::Statevector(2, std::move(v));
    };
    const auto sx = load(qkm::feature_map_state(x));
    const auto sz = load(qkm::feature_map_state(z));
    auto joint = qkm::tensor_product(qkm::tensor_product(qkm::prepare_basis_zero(1), sx), sz);
    joint = qkm::apply_hadamard(std::move(joint), {0});
    joint = qkm::apply_cswap(std::move(joint), {0},
                             std::vector<qkm::QubitIndex>{{1}, {2}},
                             std::vector<qkm::QubitIndex>{{3}, {4}});
    joint = qkm::apply_hadamard(std::move(joint), {0});
    const double p0 = qkm::ancilla_zero_probability(joint, {0});
    return 2.0 * p0 - 1.0;
}

} // namespace

TEST_CASE("phase_unitary is diagonal, unitary, and signs phases correctly") {
    const auto u = qkm::phase_unitary(std::array<double, 2>{0.0, 0.0});
    CHECK(approx_identity(dagger_product(u), 1e-12));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r != c) CHECK(std::abs(u[4 * r + c]) == 0.0);

    // x = (0,0): the single-feature angles vanish and the pair angle is
    // pi^2 with sign (-1)^(b0 xor b1).
    const double pp = kPi * kPi;
    CHECK(std::abs(u[0] - std::polar(1.0, pp)) < 1e-12);
    CHECK(std::abs(u[5] - std::polar(1.0, -pp)) < 1e-12);
    CHECK(std::abs(u[10] - std::polar(1.0, -pp)) < 1e-12);
    CHECK(std::abs(u[15] - std::polar(1.0, pp)) < 1e-12);
}

TEST_CASE("phase_unitary at (pi, pi) collapses to the identity") {
    // All three angle terms are multiples of 2 pi or cancel exactly.
    const auto u = qkm::phase_unitary(std::array<double, 2>{kPi, kPi});
    CHECK(approx_identity(u, 1e-12));
}

TEST_CASE("phase_unitary validates input") {
    CHECK_THROWS_AS(qkm::phase_unitary(std::vector<double>{1.0}), qkm::ShapeError);
    CHECK_THROWS_AS(
        qkm::phase_unitary(std::vector<double>{1.0, std::nan("")}),
        qkm::DegenerateInputError);
}

TEST_CASE("feature_map_unitary is unitary and its first column is the state") {
    qkm::SplitMix64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::array<double, 2> x{2.0 * kPi * rng.next_double(),
                                      2.0 * kPi * rng.next_double()};
        const auto m = qkm::feature_map_unitary(x);
        CHECK(approx_identity(dagger_product(m), 1e-12));
        const auto s = qkm::feature_map_state(x);
        for (int r = 0; r < 4; ++r) CHECK(std::abs(m[4 * r] - s[r]) < 1e-14);
    }
}

TEST_CASE("kernel_entry matches independently computed values") {
    // Frozen values from a standalone dense-matrix evaluation of the
    // feature map.
    const auto k1 = qkm::kernel_entry(std::array<double, 2>{0.0, 0.0},
                                      std::array<double, 2>{kPi / 2, kPi / 2});
    CHECK(k1 == doctest::Approx(0.8094100050356479).epsilon(1e-10));

    const auto k2 = qkm::kernel_entry(std::array<double, 2>{0.0, 0.0},
                                      std::array<double, 2>{kPi, kPi});
    CHECK(k2 == doctest::Approx(0.8148408626482389).epsilon(1e-10));

    const auto k3 = qkm::kernel_entry(std::array<double, 2>{1.0, 2.0},
                                      std::array<double, 2>{0.5, 1.5});
    CHECK(k3 == doctest::Approx(0.2795932815884584).epsilon(1e-10));

    const auto k4 = qkm::kernel_entry(std::array<double, 2>{3.1, 0.7},
                                      std::array<double, 2>{5.9, 2.2});
    CHECK(k4 == doctest::Approx(0.6135904483728355).epsilon(1e-10));
}

TEST_CASE("kernel_entry agrees with the swap-test route") {
    qkm::SplitMix64 rng(140);
    for (int trial = 0; trial < 20; ++trial) {
        const std::array<double, 2> x{2.0 * kPi * rng.next_double(),
                                      2.0 * kPi * rng.next_double()};
        const std::array<double, 2> z{2.0 * kPi * rng.next_double(),
                                      2.0 * kPi * rng.next_double()};
        const double direct = qkm::kernel_entry(x, z);
        const double circuit = kernel_via_swap_test(x, z);
        CHECK(direct == doctest::Approx(circuit).epsilon(1e-10));
    }
}

TEST_CASE("kernel_entry basic properties") {
    qkm::SplitMix64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::array<double, 2> x{2.0 * kPi * rng.next_double(),
                                      2.0 * kPi * rng.next_double()};
        const std::array<double, 2> z{2.0 * kPi * rng.next_double(),
                                      2.0 * kPi * rng.next_double()};
        const double self = qkm::kernel_entry(x, x);
        CHECK(self == doctest::Approx(1.0).epsilon(1e-12));
        const double xz = qkm::kernel_entry(x, z);
        CHECK(xz >= 0.0);
        CHECK(xz <= 1.0);
        CHECK(xz == doctest::Approx(qkm::kernel_entry(z, x)).epsilon(1e-12));
    }

    // Extra trailing features are ignored; only the first two count.
    const std::vector<double> long_x{1.0, 2.0, 9.0, -4.0};
    const std::vector<double> long_z{0.5, 1.5, -3.0};
    CHECK(qkm::kernel_entry(long_x, long_z) ==
          doctest::Approx(0.2795932815884584).epsilon(1e-10));
    CHECK_THROWS_AS(qkm::kernel_entry(std::vector<double>{1.0}, long_z),
                    qkm::ShapeError);
}

TEST_CASE("shots-mode kernel entries are seeded binomial frequencies") {
    const std::array<double, 2> x{1.0, 2.0};
    const std::array<double, 2> z{0.5, 1.5};
    const double exact = qkm::kernel_entry(x, z);
    const double a = qkm::kernel_entry(x, z, EstimationMode::shots, 8192, 5);
    const double b = qkm::kernel_entry(x, z, EstimationMode::shots, 8192, 5);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    // A frequency over 8192 shots is a multiple of 1/8192.
    CHECK(std::abs(a * 8192.0 - std::round(a * 8192.0)) < 1e-9);
    // And it should sit within 6 sigma of the exact value.
    const double sigma = std::sqrt(exact * (1.0 - exact) / 8192.0);
    CHECK(std::abs(a - exact) < 6.0 * sigma + 1e-4);
    CHECK_THROWS_AS(qkm::kernel_entry(x, z, EstimationMode::shots, 0, 1),
                    qkm::PreconditionError);
}

TEST_CASE("kernel_gram is symmetric with unit diagonal and PSD") {
    qkm::SplitMix64 rng(500);
    Matrix points(8, 2);
    for (std::size_t r = 0; r < points.rows; ++r) {
        points.at(r, 0) = 2.0 * kPi * rng.next_double();
        points.at(r, 1) = 2.0 * kPi * rng.next_double();
    }
    const auto gram = qkm::kernel_gram(points);
    REQUIRE(gram.matrix.rows == 8);
    REQUIRE(gram.matrix.cols == 8);
    CHECK(gram.mode == EstimationMode::exact);
    CHECK(gram.shots == 0);

    Eigen::MatrixXd g(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) g(r, c) = gram.matrix.at(r, c);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int r = 0; r < 8; ++r) CHECK(g(r, r) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(g);
    CHECK(eigs.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("kernel_gram handles tiny and duplicate inputs") {
    Matrix single(1, 2);
    single.at(0, 0) = 0.3;
    single.at(0, 1) = 1.1;
    const auto g1 = qkm::kernel_gram(single);
    CHECK(g1.matrix.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix dup(2, 2);
    for (int r = 0; r < 2; ++r) {
        dup.at(r, 0) = 2.0;
        dup.at(r, 1) = 4.0;
    }
    const auto g2 = qkm::kernel_gram(dup);
    CHECK(g2.matrix.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g2.matrix.at(1, 0) == g2.matrix.at(0, 1));
}

TEST_CASE("shots-mode gram stays symmetric and reproducible") {
    qkm::SplitMix64 rng(501);
    Matrix points(6, 2);
    for (std::size_t r = 0; r < points.rows; ++r) {
        points.at(r, 0) = 2.0 * kPi * rng.next_double();
        points.at(r, 1) = 2.0 * kPi * rng.next_double();
    }
    const auto a = qkm::kernel_gram(points, EstimationMode::shots, 2048, 9);
    const auto b = qkm::kernel_gram(points, EstimationMode::shots, 2048, 9);
    CHECK(a.matrix.values == b.matrix.values);
    CHECK(a.shots == 2048);
    for (std::size_t r = 0; r < 6; ++r) {
        CHECK(a.matrix.at(r, r) == 1.0);
        for (std::size_t c = 0; c < 6; ++c) {
            CHECK(a.matrix.at(r, c) == a.matrix.at(c, r));
            CHECK(a.matrix.at(r, c) >= 0.0);
            CHECK(a.matrix.at(r, c) <= 1.0);
        }
    }

    const auto other = qkm::kernel_gram(points, EstimationMode::shots, 2048, 10);
    CHECK(a.matrix.values != other.matrix.values);
}

TEST_CASE("kernel_cross evaluates the rectangular block") {
    qkm::SplitMix64 rng(502);
    Matrix train(4, 2), test(3, 2);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 2; ++c) train.at(r, c) = 2.0 * kPi * rng.next_double();
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) test.at(r, c) = 2.0 * kPi * rng.next_double();

    const auto cross = qkm::kernel_cross(test, train);
    REQUIRE(cross.rows == 3);
    REQUIRE(cross.cols == 4);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(cross.at(r, c) ==
                  doctest::Approx(qkm::kernel_entry(test.row(r), train.row(c)))
                      .epsilon(1e-12));
}

TEST_CASE("gram CSV round-trips exactly") {
    qkm::SplitMix64 rng(503);
    Matrix points(5, 2);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 2; ++c) points.at(r, c) = 2.0 * kPi * rng.next_double();
    const auto gram = qkm::kernel_gram(points, EstimationMode::shots, 4096, 21);

    const auto path = std::filesystem::temp_directory_path() / "qkm_gram_roundtrip.csv";
    qkm::save_gram(gram, path);
    const auto loaded = qkm::load_gram(path);
    CHECK(loaded.matrix.values == gram.matrix.values);
    CHECK(loaded.mode == gram.mode);
    CHECK(loaded.shots == gram.shots);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(qkm::load_gram("/nonexistent/qkm_gram.csv"), qkm::DataError);
}
