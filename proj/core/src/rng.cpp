#include "ogplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace ogplab {

Seed derive_seed(Seed seed, std::string_view label) noexcept {
    // FNV-1a over the label, folded into the seed through two mixing rounds.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(seed) ^ h);
}

double standard_normal_at(Seed seed, std::uint64_t counter) noexcept {
    const std::uint64_t key = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    const std::uint64_t a = splitmix64(key + 2 * counter);
    const std::uint64_t b = splitmix64(key + 2 * counter + 1);
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace ogplab
