#pragma once

#include "ogplab/solve.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace ogplab {

/// Pair counts on the overlap lattice R = 1 - 2k/n, k = Hamming distance.
///
/// counts[k] is the number of pairs at distance k. In absolute mode pairs are folded
/// onto min(k, n - k), so only k <= n/2 is populated and value(k) = |R|.
struct OverlapSpectrum {
    std::size_t n = 0;
    bool absolute = true;
    std::vector<std::uint64_t> counts;

    double value(std::size_t k) const noexcept {
        // (n - 2k) / n rounds once, so lattice points such as 0.2 print exactly.
        return (static_cast<double>(n) - 2.0 * static_cast<double>(k)) / static_cast<double>(n);
    }
    std::uint64_t total() const noexcept;
    bool empty() const noexcept { return total() == 0; }

    /// Nonzero (overlap, count) pairs in increasing overlap.
    std::vector<std::pair<double, std::uint64_t>> histogram() const;
    /// The multiset itself, increasing.
    std::vector<double> values() const;

    friend bool operator==(const OverlapSpectrum&, const OverlapSpectrum&) = default;
};

struct OverlapOptions {
    bool absolute = true;
    bool include_self = false;
    unsigned workers = 1;
};

/// All C(|S|, 2) pairwise overlaps (plus |S| self pairs with include_self), by popcount
/// on packed configurations. Needs at least two members.
OverlapSpectrum pairwise_overlaps(const SolutionSet& s, const OverlapOptions& opts = {});

/// Normalized Hamming distances H/n = (1 - R)/2 with their counts, increasing.
std::vector<std::pair<double, std::uint64_t>> hamming_spectrum(const OverlapSpectrum& s);

struct GapParams {
    double min_width = 0.2;
    /// Unset means max(3, ceil(1% of the pair count)).
    std::optional<std::uint64_t> min_support;
};

std::uint64_t default_min_support(std::uint64_t pairs);

struct GapReport {
    bool found = false;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double width = 0.0;
    std::uint64_t support_below = 0;
    std::uint64_t support_above = 0;
    /// Support threshold actually applied.
    std::uint64_t min_support = 0;
};

/// Widest empty open interval (mu1, mu2) between occupied lattice values that has at
/// least min_support pairs on each side. Ties go to the larger min(support_below,
/// support_above), then the smaller mu1. found iff such an interval exists with
/// width >= min_width; otherwise the best candidate (if any) is still reported.
GapReport detect_gap(const OverlapSpectrum& s, const GapParams& params = {});

/// CSV with header `overlap,count`, one row per occupied lattice value.
void write_spectrum_csv(std::ostream& os, const OverlapSpectrum& s);

} // namespace ogplab
