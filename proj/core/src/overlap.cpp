#include "ogplab/overlap.hpp"

#include "ogplab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace ogplab {

std::uint64_t OverlapSpectrum::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<std::pair<double, std::uint64_t>> OverlapSpectrum::histogram() const {
    std::vector<std::pair<double, std::uint64_t>> h;
    // Larger k means smaller overlap.
    for (std::size_t k = counts.size(); k-- > 0;) {
        if (counts[k] != 0) {
            h.emplace_back(value(k), counts[k]);
        }
    }
    return h;
}

std::vector<double> OverlapSpectrum::values() const {
    std::vector<double> v;
    for (const auto& [r, c] : histogram()) {
        v.insert(v.end(), c, r);
    }
    return v;
}

OverlapSpectrum pairwise_overlaps(const SolutionSet& s, const OverlapOptions& opts) {
    const std::size_t count = s.members.size();
    if (count < 2) {
        throw ContractViolation(fmt::format("overlap spectrum needs at least two members, got {}", count));
    }
    const std::size_t n = s.n;
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> packed(count * words);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& z = s.members[i].config;
        if (z.size() != n) {
            throw ContractViolation("member length differs from the solution set size");
        }
        std::copy(z.words().begin(), z.words().end(), packed.begin() + static_cast<std::ptrdiff_t>(i * words));
    }

    auto rows = [&](unsigned stride, unsigned offset, std::vector<std::uint64_t>& hist) {
        for (std::size_t i = offset; i < count; i += stride) {
            const std::uint64_t* a = &packed[i * words];
            for (std::size_t j = opts.include_self ? i : i + 1; j < count; ++j) {
                const std::uint64_t* b = &packed[j * words];
                std::size_t k = 0;
                for (std::size_t w = 0; w < words; ++w) {
                    k += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
                }
                ++hist[k];
            }
        }
    };

    OverlapSpectrum out;
    out.n = n;
    out.absolute = opts.absolute;
    out.counts.assign(n + 1, 0);
    const unsigned workers = std::max(1U, std::min<unsigned>(opts.workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        rows(1, 0, out.counts);
    } else {
        // Interleaved rows balance the triangular workload; integer counts merge exactly.
        std::vector<std::vector<std::uint64_t>> local(workers, std::vector<std::uint64_t>(n + 1, 0));
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] { rows(workers, w, local[w]); });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& h : local) {
            for (std::size_t k = 0; k <= n; ++k) {
                out.counts[k] += h[k];
            }
        }
    }
    if (opts.absolute) {
        for (std::size_t k = n / 2 + 1; k <= n; ++k) {
            out.counts[n - k] += out.counts[k];
            out.counts[k] = 0;
        }
    }
    return out;
}

std::vector<std::pair<double, std::uint64_t>> hamming_spectrum(const OverlapSpectrum& s) {
    std::vector<std::pair<double, std::uint64_t>> h;
    for (std::size_t k = 0; k < s.counts.size(); ++k) {
        if (s.counts[k] != 0) {
            h.emplace_back(static_cast<double>(k) / static_cast<double>(s.n), s.counts[k]);
        }
    }
    return h;
}

std::uint64_t default_min_support(std::uint64_t pairs) {
    const auto one_percent = static_cast<std::uint64_t>(std::ceil(0.01 * static_cast<double>(pairs)));
    return std::max<std::uint64_t>(3, one_percent);
}

GapReport detect_gap(const OverlapSpectrum& s, const GapParams& params) {
    if (!(params.min_width > 0.0 && params.min_width < 2.0)) {
        throw ParameterError(fmt::format("gap min_width must lie in (0, 2), got {}", params.min_width));
    }
    GapReport best;
    const std::uint64_t total = s.total();
    best.min_support = params.min_support.value_or(default_min_support(total));
    const auto hist = s.histogram();

    bool have = false;
    std::uint64_t below = 0;
    for (std::size_t i = 0; i + 1 < hist.size(); ++i) {
        below += hist[i].second;
        const std::uint64_t above = total - below;
        if (below < best.min_support || above < best.min_support) {
            continue;
        }
        const double mu1 = hist[i].first;
        const double mu2 = hist[i + 1].first;
        const double width = mu2 - mu1;
        const std::uint64_t support = std::min(below, above);
        const bool better = !have || width > best.width + 1e-12 ||
                            (std::abs(width - best.width) <= 1e-12 &&
                             support > std::min(best.support_below, best.support_above));
        if (better) {
            best.mu1 = mu1;
            best.mu2 = mu2;
            best.width = width;
            best.support_below = below;
            best.support_above = above;
            have = true;
        }
    }
    best.found = have && best.width >= params.min_width - 1e-12;
    return best;
}

void write_spectrum_csv(std::ostream& os, const OverlapSpectrum& s) {
    os << "overlap,count\n";
    for (const auto& [r, c] : s.histogram()) {
        os << fmt::format("{},{}\n", r, c);
    }
}

} // namespace ogplab
