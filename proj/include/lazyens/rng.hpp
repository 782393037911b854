#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace lazyens {

/// SplitMix64 (Steele, Lea & Flood 2014): output k of a stream seeded with s
/// is mix(s + (k+1)·golden), so arbitrary positions can be computed directly.
/// Used here to derive independent per-chunk stream seeds from (seed, index).
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() noexcept {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ 1.0 (Blackman & Vigna 2019), state seeded through SplitMix64.
/// Reproducible across platforms: the integer stream is fully specified, and
/// the derived doubles use only exactly rounded operations plus libm
/// log/sqrt/sin/cos, so batches are identical real sequences up to libm and
/// byte-identical within one build.
class Xoshiro256PlusPlus {
public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed) noexcept {
        SplitMix64 sm{seed};
        for (auto& word : s_) word = sm.next();
    }

    /// Seed for the `index`-th independent substream of `seed`.
    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
        SplitMix64 sm{seed + index * 0x9E3779B97F4A7C15ULL};
        return sm.next();
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform on [0, 1) with 53-bit resolution
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Exp(1) via inversion; -log(1-u) is finite for u in [0,1)
    double exponential() noexcept { return -std::log1p(-uniform01()); }

    /// standard normal pair, Box–Muller
    std::pair<double, double> normal_pair() noexcept {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(angle), r * std::sin(angle)};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace lazyens
