#pragma once

#include <cstdint>

namespace bandit {

/// SplitMix64 finalizer: a strong 64-bit mixing function (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Derives the seed of replication stream `r` from a base seed.
///
/// Streams for distinct (base, r) are decorrelated by full 64-bit mixing, so
/// replication r is reproducible regardless of how replications are assigned
/// to workers. Never use sequential seeds for parallel replications.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t r) {
    return mix64(base ^ mix64(r + 0x9E3779B97F4A7C15ull));
}

/// SplitMix64 generator. Tiny state, passes standard statistical batteries,
/// and trivially seedable from derive_seed, which is what the simulation
/// engine needs for deterministic parallel replications.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace bandit
