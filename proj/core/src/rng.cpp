#include "qkm/rng.hpp"

#include <cmath>

#include "qkm/errors.hpp"

namespace qkm {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
    state_ += kGamma;
    return mix64(state_);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) {
        throw PreconditionError("next_below: bound must be positive");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = next();
    while (r >= limit) {
        r = next();
    }
    return r % bound;
}

double SplitMix64::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t h = mix64(master + kGamma);
    h = mix64(h ^ (a + kGamma));
    h = mix64(h ^ (b + 2 * kGamma));
    h = mix64(h ^ (c + 3 * kGamma));
    return h;
}

std::int64_t binomial_draw(SplitMix64& rng, std::int64_t trials, double p) {
    if (trials < 0) {
        throw PreconditionError("binomial_draw: negative trial count");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw PreconditionError("binomial_draw: probability outside [0,1]");
    }
    std::int64_t count = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        if (rng.next_double() < p) {
            ++count;
        }
    }
    return count;
}

} // namespace qkm
