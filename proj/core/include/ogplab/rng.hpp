#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ogplab {

using Rng = std::mt19937_64;

/// Seed type used throughout the library.
using Seed = std::uint64_t;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent sub-stream seed for a named pipeline stage ("graph", "couplings", ...).
/// Changing the draws of one stage never perturbs another.
Seed derive_seed(Seed seed, std::string_view label) noexcept;

inline Rng make_rng(Seed seed) { return Rng{splitmix64(seed)}; }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound); bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>{0, bound - 1}(rng);
}

/// Counter-based standard normal draw: the value depends only on (seed, counter).
double standard_normal_at(Seed seed, std::uint64_t counter) noexcept;

} // namespace ogplab
