#include "ogplab/spin_config.hpp"

#include "ogplab/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace ogplab {

SpinConfig::SpinConfig(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

SpinConfig SpinConfig::from_spins(std::span<const int> spins) {
    SpinConfig z(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] != 1 && spins[i] != -1) {
            throw ParameterError(fmt::format("spin {} has value {}, expected +1 or -1", i, spins[i]));
        }
        z.set_spin(i, spins[i]);
    }
    return z;
}

SpinConfig SpinConfig::from_bits(std::size_t n, std::uint64_t bits) {
    if (n > 64) {
        throw ParameterError("from_bits supports at most 64 spins");
    }
    if ((bits & ~low_mask(n)) != 0) {
        throw ParameterError("bits set beyond the configuration length");
    }
    SpinConfig z(n);
    if (n > 0) {
        z.words_[0] = bits;
    }
    return z;
}

SpinConfig SpinConfig::from_hex(std::size_t n, std::string_view hex) {
    SpinConfig z(n);
    std::size_t bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
        const char c = *it;
        unsigned nibble = 0;
        if (c >= '0' && c <= '9') {
            nibble = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            nibble = static_cast<unsigned>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            nibble = static_cast<unsigned>(c - 'A' + 10);
        } else {
            throw FormatError(fmt::format("invalid hex digit '{}'", c));
        }
        for (unsigned k = 0; k < 4; ++k, ++bit) {
            if ((nibble >> k) & 1U) {
                if (bit >= n) {
                    throw FormatError("hex configuration has bits beyond its length");
                }
                z.set_bit(bit, true);
            }
        }
    }
    return z;
}

void SpinConfig::set_bit(std::size_t i, bool value) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= m;
    } else {
        words_[i >> 6] &= ~m;
    }
}

SpinConfig SpinConfig::negated() const {
    SpinConfig z = *this;
    for (auto& w : z.words_) {
        w = ~w;
    }
    if (n_ % 64 != 0) {
        z.words_.back() &= low_mask(n_ % 64);
    }
    return z;
}

std::vector<int> SpinConfig::spins() const {
    std::vector<int> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = spin(i);
    }
    return out;
}

std::string SpinConfig::to_hex() const {
    const std::size_t width = hex_width(n_);
    std::string out(width, '0');
    for (std::size_t d = 0; d < width; ++d) {
        unsigned nibble = 0;
        for (unsigned k = 0; k < 4; ++k) {
            const std::size_t i = 4 * d + k;
            if (i < n_ && bit(i)) {
                nibble |= 1U << k;
            }
        }
        out[width - 1 - d] = "0123456789abcdef"[nibble];
    }
    return out;
}

std::strong_ordering operator<=>(const SpinConfig& a, const SpinConfig& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) {
        return c;
    }
    // Compare as big integers, most significant word first.
    for (std::size_t w = a.words_.size(); w-- > 0;) {
        if (auto c = a.words_[w] <=> b.words_[w]; c != 0) {
            return c;
        }
    }
    return std::strong_ordering::equal;
}

std::string bits_to_hex(std::uint64_t bits, std::size_t n) {
    return fmt::format("{:0{}x}", bits, hex_width(n));
}

} // namespace ogplab
