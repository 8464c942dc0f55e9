#include "qkm/encoding.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qkm/errors.hpp"

namespace qkm {

double vector_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw DegenerateInputError("feature vector has a non-finite component");
        }
        s += v * v;
    }
    return std::sqrt(s);
}

int index_qubit_count(std::size_t dimension) {
    if (dimension == 0) {
        throw ShapeError("feature dimension must be at least 1");
    }
    int n = 1;
    while ((std::size_t{1} << n) < dimension) {
        ++n;
    }
    return n;
}

Statevector amplitude_encode(std::span<const double> x) {
    if (x.empty()) {
        throw ShapeError("amplitude_encode: empty feature vector");
    }
    if (vector_norm(x) == 0.0) {
        throw DegenerateInputError("amplitude_encode: zero vector has no amplitude encoding");
    }
    const int n = index_qubit_count(x.size());
    std::vector<QubitIndex> targets(n);
    for (int q = 0; q < n; ++q) {
        targets[q] = QubitIndex{q};
    }
    return prepare_amplitude_state(x, targets, prepare_basis_zero(n));
}

EncodedPair build_encoded_pair(std::span<const double> xi, std::span<const double> xj) {
    if (xi.size() != xj.size()) {
        throw ShapeError("build_encoded_pair: dimension mismatch (" +
                         std::to_string(xi.size()) + " vs " + std::to_string(xj.size()) + ")");
    }
    const double mag_i = vector_norm(xi);
    const double mag_j = vector_norm(xj);
    if (mag_i == 0.0 || mag_j == 0.0) {
        throw DegenerateInputError("build_encoded_pair: zero vector has no amplitude encoding");
    }

    const std::size_t dim = xi.size();
    const int n = index_qubit_count(dim);

    // psi over 1+n qubits: amplitude x_i[p]/|x_i| on (ancilla=0, index=p) and
    // x_j[p]/|x_j| on (ancilla=1, index=p). Interleaving the two unit
    // vectors gives a coefficient list of norm sqrt(2), so the shared
    // normalization in prepare_amplitude_state supplies the 1/sqrt(2).
    std::vector<double> interleaved(std::size_t{2} << n, 0.0);
    for (std::size_t p = 0; p < dim; ++p) {
        interleaved[2 * p] = xi[p] / mag_i;
        interleaved[2 * p + 1] = xj[p] / mag_j;
    }
    std::vector<QubitIndex> all_targets(n + 1);
    for (int q = 0; q <= n; ++q) {
        all_targets[q] = QubitIndex{q};
    }
    Statevector psi =
        prepare_amplitude_state(interleaved, all_targets, prepare_basis_zero(n + 1));

    const double phi_coeffs[2] = {mag_i, -mag_j};
    Statevector phi = prepare_amplitude_state(phi_coeffs, std::array{QubitIndex{0}},
                                              prepare_basis_zero(1));

    return EncodedPair{std::move(psi), std::move(phi), mag_i * mag_i + mag_j * mag_j,
                       mag_i, mag_j, n};
}

} // namespace qkm
