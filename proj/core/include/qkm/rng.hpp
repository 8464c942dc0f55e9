#pragma once

#include <cstdint>

namespace qkm {

/// Finalizer of the SplitMix64 generator (Steele, Lea, Flood 2014). Maps a
/// 64-bit word to a well-mixed 64-bit word; bijective.
std::uint64_t mix64(std::uint64_t z);

/// Deterministic 64-bit counter-based generator: the state advances by a
/// fixed odd gamma and each output is mix64(state). Output streams are
/// bit-identical across platforms for a given seed, which is what every
/// seeded operation in this library relies on.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform double in [0, 1), 53 random bits.
    double next_double();

    /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal via the Marsaglia polar method. Pairs are generated
    /// at once; the spare is cached and returned on the following call.
    double next_normal();

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stable seed derivation for independent substreams, e.g. the per-pair
/// seeds hash(master, i, j, iteration) used by shot-sampled distance calls.
/// Results do not depend on evaluation or scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Number of successes in `trials` Bernoulli(p) draws taken from `rng`,
/// one uniform per trial. Exact binomial sampling, deterministic per stream.
std::int64_t binomial_draw(SplitMix64& rng, std::int64_t trials, double p);

} // namespace qkm
