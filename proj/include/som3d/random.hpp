#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace som3d {

/// SplitMix64 finalizer. Used to derive independent substream seeds so that
/// results never depend on evaluation order or worker count.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for the substream identified by `keys` under `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(seed);
    for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits. Portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01(rng);
}

}  // namespace som3d
