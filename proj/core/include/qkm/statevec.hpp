#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qkm {

/// Position of a qubit within a register. Bit q of a basis-state index is
/// the state of qubit q, so qubit 0 is the least significant bit.
struct QubitIndex {
    int value = 0;
};

/// Dense complex statevector over n qubits. Unit norm is an invariant of
/// every public operation; callers cannot mutate amplitudes directly.
class Statevector {
public:
    /// Default register cap: 2^24 amplitudes. Raise it explicitly when a
    /// larger simulation is really wanted.
    static constexpr int kDefaultQubitCap = 24;

    /// The all-zeros basis state |0...0>.
    explicit Statevector(int num_qubits, int qubit_cap = kDefaultQubitCap);

    /// A state with explicit amplitudes; length must be 2^num_qubits and
    /// the norm must already be 1 within 1e-6 (it is renormalized exactly).
    Statevector(int num_qubits, std::vector<std::complex<double>> amplitudes,
                int qubit_cap = kDefaultQubitCap);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const std::complex<double>> amplitudes() const { return amps_; }
    std::complex<double> amplitude(std::size_t basis_index) const {
        return amps_[basis_index];
    }

    double norm_squared() const;

private:
    int num_qubits_;
    std::vector<std::complex<double>> amps_;

    friend Statevector prepare_amplitude_state(std::span<const double>,
                                               std::span<const QubitIndex>, Statevector);
    friend Statevector apply_hadamard(Statevector, QubitIndex);
    friend Statevector apply_cswap(Statevector, QubitIndex, std::span<const QubitIndex>,
                                   std::span<const QubitIndex>);
    friend Statevector tensor_product(const Statevector&, const Statevector&);
};

/// |0...0> over num_qubits qubits. 1 <= num_qubits <= qubit_cap.
Statevector prepare_basis_zero(int num_qubits,
                               int qubit_cap = Statevector::kDefaultQubitCap);

/// Loads normalized real coefficients onto the target qubits by direct
/// amplitude assignment. targets[0] addresses the least significant bit of
/// the coefficient index; missing coefficients up to 2^targets.size() are
/// zero. The targets must currently be in |0...0> and unentangled with the
/// rest of the register (equivalently: every basis state with a nonzero
/// target bit has zero amplitude).
Statevector prepare_amplitude_state(std::span<const double> coefficients,
                                    std::span<const QubitIndex> targets, Statevector state);

/// Single-qubit Hadamard on qubit q.
Statevector apply_hadamard(Statevector state, QubitIndex q);

/// Controlled swap of the qubit groups a and b (pairwise, a[i] with b[i])
/// on every basis state whose control bit is 1. All indices must be
/// distinct.
Statevector apply_cswap(Statevector state, QubitIndex control,
                        std::span<const QubitIndex> a, std::span<const QubitIndex> b);

/// Probability of reading 0 when measuring qubit q: the summed squared
/// magnitude over basis states with bit q clear.
double ancilla_zero_probability(const Statevector& state, QubitIndex q);

/// Number of zero outcomes over `shots` simulated ancilla measurements with
/// zero-probability p0. The marginal of each shot is Bernoulli(p0), so the
/// count is an exact binomial draw; deterministic for a fixed seed.
std::int64_t sample_ancilla(double p0, std::int64_t shots, std::uint64_t rng_seed);

/// Combined register with `low` on qubits [0, low.n) and `high` above.
Statevector tensor_product(const Statevector& low, const Statevector& high);

} // namespace qkm
