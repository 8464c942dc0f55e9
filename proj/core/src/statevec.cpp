#include "qkm/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qkm/errors.hpp"
#include "qkm/rng.hpp"

namespace qkm {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

void check_qubit_count(int num_qubits, int qubit_cap) {
    if (qubit_cap < 1) {
        throw CapacityError("qubit cap must be at least 1");
    }
    if (num_qubits < 1 || num_qubits > qubit_cap) {
        throw CapacityError("qubit count " + std::to_string(num_qubits) +
                            " outside [1, " + std::to_string(qubit_cap) + "]");
    }
}

void check_index(const Statevector& state, QubitIndex q, const char* what) {
    if (q.value < 0 || q.value >= state.num_qubits()) {
        throw PreconditionError(std::string(what) + ": qubit index " +
                                std::to_string(q.value) + " out of range for " +
                                std::to_string(state.num_qubits()) + " qubits");
    }
}

} // namespace

Statevector::Statevector(int num_qubits, int qubit_cap) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits, qubit_cap);
    amps_.assign(std::size_t{1} << num_qubits, {0.0, 0.0});
    amps_[0] = {1.0, 0.0};
}

Statevector::Statevector(int num_qubits, std::vector<std::complex<double>> amplitudes,
                         int qubit_cap)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    check_qubit_count(num_qubits, qubit_cap);
    if (amps_.size() != (std::size_t{1} << num_qubits)) {
        throw ShapeError("amplitude vector length is not 2^num_qubits");
    }
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > 1e-6) {
        throw PreconditionError("amplitudes are not normalized (|norm^2 - 1| = " +
                                std::to_string(std::abs(n2 - 1.0)) + ")");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) {
        a *= inv;
    }
}

double Statevector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) {
        s += std::norm(a);
    }
    return s;
}

Statevector prepare_basis_zero(int num_qubits, int qubit_cap) {
    return Statevector(num_qubits, qubit_cap);
}

Statevector prepare_amplitude_state(std::span<const double> coefficients,
                                    std::span<const QubitIndex> targets, Statevector state) {
    if (targets.empty()) {
        throw PreconditionError("prepare_amplitude_state: no target qubits");
    }
    std::uint64_t target_mask = 0;
    for (const auto& t : targets) {
        check_index(state, t, "prepare_amplitude_state");
        const std::uint64_t bit = std::uint64_t{1} << t.value;
        if (target_mask & bit) {
            throw PreconditionError("prepare_amplitude_state: repeated target qubit");
        }
        target_mask |= bit;
    }
    const std::size_t capacity = std::size_t{1} << targets.size();
    if (coefficients.empty() || coefficients.size() > capacity) {
        throw ShapeError("prepare_amplitude_state: coefficient count must be in [1, 2^targets]");
    }

    double norm2 = 0.0;
    for (double c : coefficients) {
        if (!std::isfinite(c)) {
            throw DegenerateInputError("prepare_amplitude_state: non-finite coefficient");
        }
        norm2 += c * c;
    }
    if (norm2 == 0.0) {
        throw DegenerateInputError("prepare_amplitude_state: all-zero coefficient vector");
    }
    const double inv_norm = 1.0 / std::sqrt(norm2);

    // Targets must carry |0...0>: any amplitude with a set target bit means
    // they are either nonzero or entangled with the rest.
    for (std::size_t idx = 0; idx < state.amps_.size(); ++idx) {
        if ((idx & target_mask) != 0 && state.amps_[idx] != std::complex<double>{0.0, 0.0}) {
            throw PreconditionError(
                "prepare_amplitude_state: target qubits are not in |0...0>");
        }
    }

    // Scatter each coefficient index p into the basis positions selected by
    // the target bits, replicating whatever the rest of the register holds.
    std::vector<std::complex<double>> out(state.amps_.size(), {0.0, 0.0});
    for (std::size_t idx = 0; idx < state.amps_.size(); ++idx) {
        const auto rest = state.amps_[idx];
        if ((idx & target_mask) != 0 || rest == std::complex<double>{0.0, 0.0}) {
            continue;
        }
        for (std::size_t p = 0; p < coefficients.size(); ++p) {
            if (coefficients[p] == 0.0) {
                continue;
            }
            std::uint64_t scattered = idx;
            for (std::size_t b = 0; b < targets.size(); ++b) {
                if (p & (std::size_t{1} << b)) {
                    scattered |= std::uint64_t{1} << targets[b].value;
                }
            }
            out[scattered] = rest * (coefficients[p] * inv_norm);
        }
    }
    state.amps_ = std::move(out);
    return state;
}

Statevector apply_hadamard(Statevector state, QubitIndex q) {
    check_index(state, q, "apply_hadamard");
    auto& amps = state.amps_;
    const std::size_t mask = std::size_t{1} << q.value;
    const std::size_t lo_mask = mask - 1;
    const std::size_t hi_mask = ~lo_mask;
    const std::size_t half = amps.size() >> 1;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
        const std::size_t i1 = i0 | mask;
        const auto a0 = amps[i0];
        const auto a1 = amps[i1];
        amps[i0] = (a0 + a1) * kInvSqrt2;
        amps[i1] = (a0 - a1) * kInvSqrt2;
    }
    return state;
}

Statevector apply_cswap(Statevector state, QubitIndex control,
                        std::span<const QubitIndex> a, std::span<const QubitIndex> b) {
    if (a.size() != b.size()) {
        throw ShapeError("apply_cswap: register groups differ in length");
    }
    check_index(state, control, "apply_cswap");
    std::uint64_t seen = std::uint64_t{1} << control.value;
    for (auto group : {a, b}) {
        for (const auto& q : group) {
            check_index(state, q, "apply_cswap");
            const std::uint64_t bit = std::uint64_t{1} << q.value;
            if (seen & bit) {
                throw PreconditionError("apply_cswap: overlapping qubit index sets");
            }
            seen |= bit;
        }
    }

    auto& amps = state.amps_;
    const std::size_t control_mask = std::size_t{1} << control.value;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & control_mask) == 0) {
            continue;
        }
        // Exchange the a and b bit groups; visit each pair once.
        std::size_t swapped = idx;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const std::size_t bit_a = (idx >> a[k].value) & 1;
            const std::size_t bit_b = (idx >> b[k].value) & 1;
            if (bit_a != bit_b) {
                swapped ^= (std::size_t{1} << a[k].value) | (std::size_t{1} << b[k].value);
            }
        }
        if (swapped > idx) {
            std::swap(amps[idx], amps[swapped]);
        }
    }
    return state;
}

double ancilla_zero_probability(const Statevector& state, QubitIndex q) {
    check_index(state, q, "ancilla_zero_probability");
    const std::size_t mask = std::size_t{1} << q.value;
    double p0 = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & mask) == 0) {
            p0 += std::norm(amps[idx]);
        }
    }
    return std::clamp(p0, 0.0, 1.0);
}

std::int64_t sample_ancilla(double p0, std::int64_t shots, std::uint64_t rng_seed) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw PreconditionError("sample_ancilla: p0 outside [0,1]");
    }
    if (shots < 1) {
        throw PreconditionError("sample_ancilla: shots must be at least 1");
    }
    SplitMix64 rng(rng_seed);
    return binomial_draw(rng, shots, p0);
}

Statevector tensor_product(const Statevector& low, const Statevector& high) {
    const int total = low.num_qubits() + high.num_qubits();
    check_qubit_count(total, Statevector::kDefaultQubitCap);
    Statevector out(total);
    auto& amps = out.amps_;
    const std::size_t low_size = low.size();
    for (std::size_t h = 0; h < high.size(); ++h) {
        const auto ah = high.amplitude(h);
        for (std::size_t l = 0; l < low_size; ++l) {
            amps[(h << low.num_qubits()) | l] = ah * low.amplitude(l);
        }
    }
    return out;
}

} // namespace qkm
