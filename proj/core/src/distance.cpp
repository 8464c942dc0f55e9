#include "qkm/distance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qkm/errors.hpp"

namespace qkm {

namespace {

Statevector run_swap_test_circuit(const EncodedPair& pair) {
    const QubitIndex ancilla{0};
    const QubitIndex psi_factor{1};
    const QubitIndex phi_register{pair.index_qubits + 2};

    Statevector joint =
        tensor_product(tensor_product(prepare_basis_zero(1), pair.psi), pair.phi);
    joint = apply_hadamard(std::move(joint), ancilla);
    joint = apply_cswap(std::move(joint), ancilla, std::array{psi_factor},
                        std::array{phi_register});
    return apply_hadamard(std::move(joint), ancilla);
}

} // namespace

SwapTestResult swap_test(const EncodedPair& pair, EstimationMode mode, std::int64_t shots,
                         std::uint64_t rng_seed) {
    const Statevector final_state = run_swap_test_circuit(pair);
    const double p0 = ancilla_zero_probability(final_state, QubitIndex{0});
    if (mode == EstimationMode::exact) {
        return SwapTestResult{p0, mode, 0, rng_seed};
    }
    const std::int64_t zeros = sample_ancilla(p0, shots, rng_seed);
    return SwapTestResult{static_cast<double>(zeros) / static_cast<double>(shots), mode,
                          shots, rng_seed};
}

DistanceEstimate distance_from_p0(const SwapTestResult& result, double z_norm) {
    if (!(result.p0 >= 0.0 && result.p0 <= 1.0)) {
        throw PreconditionError("distance_from_p0: p0 outside [0,1]");
    }
    if (!(z_norm > 0.0)) {
        throw PreconditionError("distance_from_p0: Z must be positive");
    }
    const double d2 = z_norm * (4.0 * result.p0 - 2.0);
    return DistanceEstimate{std::max(0.0, d2), result, z_norm};
}

DistanceEstimate quantum_distance(std::span<const double> xi, std::span<const double> xj,
                                  EstimationMode mode, std::int64_t shots,
                                  std::uint64_t rng_seed) {
    const EncodedPair pair = build_encoded_pair(xi, xj);
    return distance_from_p0(swap_test(pair, mode, shots, rng_seed), pair.z_norm);
}

double classical_distance_oracle(std::span<const double> xi, std::span<const double> xj) {
    if (xi.size() != xj.size()) {
        throw ShapeError("classical_distance_oracle: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t p = 0; p < xi.size(); ++p) {
        const double d = xi[p] - xj[p];
        s += d * d;
    }
    return s;
}

std::string swap_test_trace(const EncodedPair& pair) {
    const int n = pair.index_qubits;
    std::ostringstream out;
    out << "registers: q0 swap-ancilla | q1 psi-ancilla | q2..q" << (n + 1)
        << " index | q" << (n + 2) << " phi\n";
    out << "prepare psi on q1..q" << (n + 1) << "\n";
    out << "prepare phi on q" << (n + 2) << "\n";
    out << "H q0\n";
    out << "CSWAP q0, q1, q" << (n + 2) << "\n";
    out << "H q0\n";
    out << "measure q0\n";
    return out.str();
}

} // namespace qkm
