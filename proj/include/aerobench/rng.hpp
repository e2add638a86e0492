// rng.hpp — deterministic random number generation.
//
// All stochastic steps in the harness draw from SplitMix64 streams so results
// are bit-identical across platforms and across standard library versions.
// std::uniform_int_distribution and friends are implementation defined, so
// draws are derived here by hand.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include "aerobench/error.hpp"

namespace aerobench {

// SplitMix64 finalizer. Used both as the generator step and to decorrelate
// seeds when deriving substreams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// FNV-1a over a byte string. Stable way to turn identifiers into seed salt.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Independent substream for replicate or worker index `idx` of a master seed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t idx) {
    return mix64(master ^ mix64(idx));
}

// Per-design stream: the same design gets the same draws no matter which
// worker or batch position processes it.
inline std::uint64_t design_seed(std::uint64_t master, std::string_view design_id) {
    return master ^ fnv1a64(design_id);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Unbiased draw in [0, bound) via thresholded modulo rejection.
    std::uint64_t bounded(std::uint64_t bound) {
        if (bound == 0) raise(ErrorCode::EmptyInput, "bounded draw with bound 0");
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Standard normal via Box-Muller. The spare value is cached so a pair of
    // calls consumes exactly two uniform draws.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// k distinct indices from [0, n) by partial Fisher-Yates. Output order is the
// draw order, which downstream code treats as significant.
inline std::vector<std::uint64_t> sample_without_replacement(SplitMix64& rng,
                                                             std::uint64_t n,
                                                             std::uint64_t k) {
    if (k > n) raise(ErrorCode::SampleLargerThanMesh, "sample size exceeds population");
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::uint64_t> out(k);
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + rng.bounded(n - i);
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

} // namespace aerobench
