#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "qkm/encoding.hpp"
#include "qkm/errors.hpp"
#include "qkm/rng.hpp"

using Complex = std::complex<double>;

TEST_CASE("index_qubit_count covers the vector with minimal qubits") {
    CHECK(qkm::index_qubit_count(1) == 1);
    CHECK(qkm::index_qubit_count(2) == 1);
    CHECK(qkm::index_qubit_count(3) == 2);
    CHECK(qkm::index_qubit_count(4) == 2);
    CHECK(qkm::index_qubit_count(5) == 3);
    CHECK(qkm::index_qubit_count(1024) == 10);
    CHECK(qkm::index_qubit_count(1025) == 11);
}

TEST_CASE("vector_norm validates and computes the Euclidean norm") {
    CHECK(qkm::vector_norm(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(qkm::vector_norm(std::vector<double>{0.0}) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(qkm::vector_norm(std::vector<double>{1.0, inf}),
                    qkm::DegenerateInputError);
    CHECK_THROWS_AS(qkm::vector_norm(std::vector<double>{std::nan("")}),
                    qkm::DegenerateInputError);
}

TEST_CASE("amplitude_encode normalizes and zero-pads") {
    auto basis = qkm::amplitude_encode(std::vector<double>{1.0, 0.0, 0.0, 0.0});
    REQUIRE(basis.num_qubits() == 2);
    CHECK(std::abs(basis.amplitude(0) - Complex{1.0, 0.0}) < 1e-15);

    // Scalar input still occupies one qubit.
    auto scalar = qkm::amplitude_encode(std::vector<double>{5.0});
    REQUIRE(scalar.num_qubits() == 1);
    CHECK(std::abs(scalar.amplitude(0) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(scalar.amplitude(1)) == 0.0);

    // Padding beyond the vector length is exactly zero.
    auto padded = qkm::amplitude_encode(std::vector<double>{1.0, 2.0, 2.0});
    REQUIRE(padded.size() == 4);
    CHECK(std::abs(padded.amplitude(3)) == 0.0);
    CHECK(padded.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(qkm::amplitude_encode(std::vector<double>{0.0, 0.0}),
                    qkm::DegenerateInputError);
    CHECK_THROWS_AS(qkm::amplitude_encode(std::vector<double>{}), qkm::ShapeError);
}

TEST_CASE("encoded states reproduce classical inner products") {
    auto a = qkm::amplitude_encode(std::vector<double>{0.6, 0.8});
    auto b = qkm::amplitude_encode(std::vector<double>{0.8, 0.6});
    Complex inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        inner += std::conj(a.amplitude(i)) * b.amplitude(i);
    CHECK(inner.real() == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(std::abs(inner.imag()) < 1e-15);
}

TEST_CASE("build_encoded_pair lays out psi and phi as documented") {
    const std::vector<double> xi{1.0, 0.0};
    const std::vector<double> xj{0.0, 1.0};
    auto pair = qkm::build_encoded_pair(xi, xj);
    CHECK(pair.z_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pair.mag_i == doctest::Approx(1.0));
    CHECK(pair.mag_j == doctest::Approx(1.0));
    CHECK(pair.index_qubits == 1);

    // psi = (|0>|xi> + |1>|xj>)/sqrt(2), internal ancilla on the low bit:
    // amplitude((p << 1) | a) = x_a[p] / (|x_a| sqrt(2)).
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(pair.psi.num_qubits() == 2);
    CHECK(pair.psi.amplitude(0b00).real() == doctest::Approx(r));  // p=0, a=0: xi[0]
    CHECK(std::abs(pair.psi.amplitude(0b01)) < 1e-15);             // p=0, a=1: xj[0]
    CHECK(std::abs(pair.psi.amplitude(0b10)) < 1e-15);             // p=1, a=0: xi[1]
    CHECK(pair.psi.amplitude(0b11).real() == doctest::Approx(r));  // p=1, a=1: xj[1]

    // phi = (|xi| |0> - |xj| |1>)/sqrt(Z).
    REQUIRE(pair.phi.num_qubits() == 1);
    CHECK(pair.phi.amplitude(0).real() == doctest::Approx(r));
    CHECK(pair.phi.amplitude(1).real() == doctest::Approx(-r));
}

TEST_CASE("build_encoded_pair handles unequal magnitudes") {
    const std::vector<double> xi{1.0, 1.0};
    const std::vector<double> xj{1.0, 0.0};
    auto pair = qkm::build_encoded_pair(xi, xj);
    CHECK(pair.z_norm == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pair.mag_i == doctest::Approx(std::sqrt(2.0)));
    CHECK(pair.mag_j == doctest::Approx(1.0));
    CHECK(pair.phi.amplitude(0).real() ==
          doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    CHECK(pair.phi.amplitude(1).real() ==
          doctest::Approx(-std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    CHECK(pair.psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_encoded_pair z_norm matches the classical value") {
    qkm::SplitMix64 rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dims = 1 + rng.next_below(12);
        std::vector<double> xi(dims), xj(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            xi[d] = 20.0 * rng.next_double() - 10.0;
            xj[d] = 20.0 * rng.next_double() - 10.0;
        }
        double z = 0.0;
        for (std::size_t d = 0; d < dims; ++d) z += xi[d] * xi[d] + xj[d] * xj[d];
        auto pair = qkm::build_encoded_pair(xi, xj);
        CHECK(pair.z_norm == doctest::Approx(z).epsilon(1e-12));
        CHECK(pair.psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(pair.phi.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("build_encoded_pair rejects invalid pairs") {
    CHECK_THROWS_AS(
        qkm::build_encoded_pair(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
        qkm::ShapeError);
    CHECK_THROWS_AS(
        qkm::build_encoded_pair(std::vector<double>{0.0}, std::vector<double>{1.0}),
        qkm::DegenerateInputError);
    CHECK_THROWS_AS(
        qkm::build_encoded_pair(std::vector<double>{1.0}, std::vector<double>{0.0}),
        qkm::DegenerateInputError);
}
