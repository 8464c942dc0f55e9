#pragma once

#include <span>
#include <vector>

#include "qkm/statevec.hpp"

namespace qkm {

/// A raw P-dimensional real feature row.
using FeatureVector = std::vector<double>;

/// Euclidean norm |x|; validates that every component is finite.
double vector_norm(std::span<const double> x);

/// Qubits needed to amplitude-encode a vector of the given dimension:
/// ceil(log2 dimension), never less than 1.
int index_qubit_count(std::size_t dimension);

/// |x> with amplitudes x_p / |x| on basis state p, zero-padded up to the
/// next power of two. Throws DegenerateInputError for a zero vector.
Statevector amplitude_encode(std::span<const double> x);

/// The two states a swap-test distance query needs, plus the classically
/// computed normalization Z = |x_i|^2 + |x_j|^2 and the stored magnitudes.
///
/// psi spans 1 + n qubits with its internal ancilla on qubit 0 and the
/// index register on qubits 1..n:
///   psi = (|0>|x_i> + |1>|x_j>) / sqrt(2)
/// phi is the single-qubit state (|x_i| |0> - |x_j| |1>) / sqrt(Z).
struct EncodedPair {
    Statevector psi;
    Statevector phi;
    double z_norm = 0.0;
    double mag_i = 0.0;
    double mag_j = 0.0;
    int index_qubits = 0;
};

EncodedPair build_encoded_pair(std::span<const double> xi, std::span<const double> xj);

} // namespace qkm
