#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace herdsim {

// SplitMix64: tiny deterministic generator with counter-based substreams.
// Substreams let each follower own an independent stream keyed by (seed, i),
// so adding followers never perturbs earlier followers' draws.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never returns 0 so it is safe under log().
    double next_open_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // 53-bit uniform on [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

// Avalanche mix of (seed, stream index) into a substream seed. Plain offsets
// of the SplitMix64 counter would make stream i's second draw equal stream
// i+1's first; the finalizer decorrelates the starting states.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// One standard-normal pair via Box-Muller on explicit uniforms.
inline std::array<double, 2> next_normal_pair(SplitMix64& rng) {
    const double u1 = rng.next_open_unit();
    const double u2 = rng.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace herdsim
