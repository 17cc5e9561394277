// SPDX-License-Identifier: Apache-2.0
//
// grassq: quantization on real and complex Grassmann manifolds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include "grassq/errors.hpp"

namespace grassq {

namespace detail {

// SplitMix64 step (Vigna). Used for seeding and stream derivation only.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives an independent 64-bit seed from (seed, stream, domain).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t domain) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x ^= 0x9E3779B97F4A7C15ULL * (domain + 1) + stream;
    h ^= splitmix64(x);
    x ^= h >> 17;
    return splitmix64(x);
}

inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace detail

/// Seedable, splittable pseudo-random stream (xoshiro256** core, SplitMix64
/// seeding). Substreams are derived from the creation seed, not the current
/// state, so a fixed chunk schedule gives results independent of how chunks
/// are assigned to workers.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) w = detail::splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second variate cached).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal CN(0, 1): E|z|^2 = 1.
    std::complex<double> cgaussian() {
        const double g1 = gaussian();
        const double g2 = gaussian();
        return {g1 * M_SQRT1_2, g2 * M_SQRT1_2};
    }

    /// Gamma(alpha, 1) variate, Marsaglia-Tsang squeeze method.
    double gamma(double alpha) {
        if (!(alpha > 0.0)) throw ArgumentError("gamma: shape must be positive");
        if (alpha < 1.0) {
            const double u = uniform_pos();
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = 0.0;
            double v = 0.0;
            do {
                x = gaussian();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Substream `index`, a function of the creation seed only. Two calls
    /// with the same index return identical streams regardless of how much
    /// this stream has been consumed.
    RngStream substream(std::uint64_t index) const {
        return RngStream(detail::derive_seed(seed_, index, kSubstreamDomain));
    }

    /// Sequentially numbered independent child stream. Consecutive forks of
    /// the same stream never collide with each other or with substreams.
    RngStream fork() {
        return RngStream(detail::derive_seed(seed_, ++forks_, kForkDomain));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static constexpr std::uint64_t kSubstreamDomain = 0x53;
    static constexpr std::uint64_t kForkDomain = 0x46;

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t forks_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace grassq
