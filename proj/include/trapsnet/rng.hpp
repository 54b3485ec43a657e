#pragma once

#include <cstdint>

namespace trapsnet {

/// Seedable counter-based random stream (SplitMix64).
///
/// The generator is fully specified here so that identical seeds produce
/// identical sample sequences on every platform: the state advances by the
/// 64-bit golden-ratio constant and each output is a finalizing mix of the
/// new state. Distribution helpers (uniform doubles, Bernoulli, bounded
/// ints) are implemented on top of the raw stream rather than through
/// <random> distributions, which are not bit-portable across standard
/// library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n) {
        // Fixed-point multiply keeps the mapping platform-stable; bias is
        // O(n / 2^64) and irrelevant at the sample counts used here.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Deterministically derive an independent child stream.
    RngStream derive(std::uint64_t tag) const {
        RngStream mixer(state_ ^ (0xD1B54A32D192ED03ULL * (tag + 1)));
        return RngStream(mixer.next_u64());
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

} // namespace trapsnet
