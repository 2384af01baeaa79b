#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ogplab {

/// A configuration z in {-1,+1}^n packed one bit per spin.
///
/// Bit convention (project-wide): z_i = (-1)^{b_i}, so bit 0 is spin +1 and bit 1 is
/// spin -1. The same encoding indexes statevector amplitudes and GF(2) unknowns.
class SpinConfig {
public:
    SpinConfig() = default;

    /// All spins +1.
    explicit SpinConfig(std::size_t n);

    static SpinConfig from_spins(std::span<const int> spins);
    /// Requires n <= 64; bits above n must be zero.
    static SpinConfig from_bits(std::size_t n, std::uint64_t bits);
    static SpinConfig from_hex(std::size_t n, std::string_view hex);

    std::size_t size() const noexcept { return n_; }

    bool bit(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
    int spin(std::size_t i) const noexcept { return bit(i) ? -1 : 1; }

    void set_bit(std::size_t i, bool value) noexcept;
    void set_spin(std::size_t i, int value) noexcept { set_bit(i, value < 0); }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    /// Global spin flip -z.
    SpinConfig negated() const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    /// First 64 spins as bits; the whole configuration when n <= 64.
    std::uint64_t low_word() const noexcept { return words_.empty() ? 0 : words_[0]; }

    std::vector<int> spins() const;

    /// Big-endian hex of the bit string (spin 0 is the least significant bit).
    std::string to_hex() const;

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
    friend std::strong_ordering operator<=>(const SpinConfig& a, const SpinConfig& b);

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Hex width used for an n-spin configuration.
constexpr std::size_t hex_width(std::size_t n) noexcept { return n == 0 ? 1 : (n + 3) / 4; }

/// Hex text for the low n bits of a packed configuration (n <= 64).
std::string bits_to_hex(std::uint64_t bits, std::size_t n);

/// Mask with the low n bits set (n <= 64).
constexpr std::uint64_t low_mask(std::size_t n) noexcept {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

} // namespace ogplab
