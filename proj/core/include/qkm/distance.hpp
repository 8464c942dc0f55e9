#pragma once

#include <cstdint>
#include <string>

#include "qkm/encoding.hpp"

namespace qkm {

enum class EstimationMode { exact, shots };

/// Shot count used when none is given; matches the circuit-repetition
/// count the estimator noise model was calibrated against.
inline constexpr std::int64_t kDefaultShots = 100000;

/// Outcome of one swap-test evaluation. In exact mode p0 is the ancilla
/// zero probability of the final state (always in [0.5, 1]); in shots mode
/// it is zero_count / shots_used.
struct SwapTestResult {
    double p0 = 0.0;
    EstimationMode mode = EstimationMode::exact;
    std::int64_t shots_used = 0;
    std::uint64_t rng_seed = 0;
};

/// A squared-distance estimate together with the measurement it came from.
struct DistanceEstimate {
    double squared_distance = 0.0;
    SwapTestResult result;
    double z_norm = 0.0;
};

/// Runs the swap-test circuit over an encoded pair: Hadamard on the test
/// ancilla, controlled swap of psi's internal ancilla with the phi register,
/// Hadamard again, then measure the test ancilla.
///
/// Register layout (qubit 0 is least significant):
///   qubit 0          swap-test ancilla
///   qubit 1          psi's internal ancilla (the swapped factor)
///   qubits 2..n+1    index register of psi
///   qubit n+2        phi register
SwapTestResult swap_test(const EncodedPair& pair,
                         EstimationMode mode = EstimationMode::exact,
                         std::int64_t shots = kDefaultShots, std::uint64_t rng_seed = 0);

/// Squared distance max(0, Z * (4 p0 - 2)). The clamp only ever engages for
/// shot-sampled p0 below 0.5; exact p0 cannot fall below 0.5.
DistanceEstimate distance_from_p0(const SwapTestResult& result, double z_norm);

/// Full pipeline: encode the pair, run the swap test, recover distance.
/// Exact mode agrees with classical_distance_oracle to within simulator
/// rounding.
DistanceEstimate quantum_distance(std::span<const double> xi, std::span<const double> xj,
                                  EstimationMode mode = EstimationMode::exact,
                                  std::int64_t shots = kDefaultShots,
                                  std::uint64_t rng_seed = 0);

/// Direct classical sum of squared component differences. Serves as the
/// independent reference the quantum route is checked against, and as the
/// classical distance backend for clustering.
double classical_distance_oracle(std::span<const double> xi, std::span<const double> xj);

/// Text dump of the swap-test gate sequence for this pair, one gate per
/// line in application order. Debugging aid; the layout is stable.
std::string swap_test_trace(const EncodedPair& pair);

} // namespace qkm
