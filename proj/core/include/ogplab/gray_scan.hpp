#pragma once

#include "ogplab/error.hpp"
#include "ogplab/instance.hpp"

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ogplab {

/// Hard ceiling for full 2^n scans; solvers apply their own, smaller cap.
inline constexpr std::size_t kGrayScanLimit = 40;

namespace detail {

template <std::size_t W, typename F>
void xorsat_gray_scan_words(const XorsatInstance& inst, F&& visit) {
    const std::size_t n = inst.n();
    const std::size_t m = inst.num_edges();
    const auto& g = inst.graph();

    // Flipping spin v toggles the satisfaction of every clause incident to v.
    std::vector<std::array<std::uint64_t, W>> flip_mask(n, std::array<std::uint64_t, W>{});
    std::array<std::uint64_t, W> unsat{};
    for (std::size_t e = 0; e < m; ++e) {
        const std::uint64_t b = std::uint64_t{1} << (e % 64);
        for (const Vertex v : g.edge(e)) {
            flip_mask[v][e / 64] ^= b;
        }
        if (inst.couplings()[e] < 0) {
            unsat[e / 64] |= b;
        }
    }
    auto cost = [&] {
        std::size_t u = 0;
        for (std::size_t w = 0; w < W; ++w) {
            u += static_cast<std::size_t>(std::popcount(unsat[w]));
        }
        return m - u;
    };

    std::uint64_t bits = 0;
    visit(bits, cost());
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto v = static_cast<std::size_t>(std::countr_zero(k));
        bits ^= std::uint64_t{1} << v;
        for (std::size_t w = 0; w < W; ++w) {
            unsat[w] ^= flip_mask[v][w];
        }
        visit(bits, cost());
    }
}

} // namespace detail

/// Visits all 2^n configurations of an XORSAT instance in reflected Gray-code order,
/// calling visit(bits, satisfied) with the packed configuration and its cost.
///
/// Each step flips one spin and updates the unsatisfied-clause bitset with one XOR
/// per word, so the cost is exact at every step.
template <typename F>
void for_each_xorsat_cost(const XorsatInstance& inst, F&& visit) {
    if (inst.n() > kGrayScanLimit) {
        throw CapacityError("Gray-code scan over more than 2^40 configurations");
    }
    const std::size_t words = (inst.num_edges() + 63) / 64;
    switch (words) {
    case 0:
    case 1: detail::xorsat_gray_scan_words<1>(inst, visit); break;
    case 2: detail::xorsat_gray_scan_words<2>(inst, visit); break;
    case 3: detail::xorsat_gray_scan_words<3>(inst, visit); break;
    case 4: detail::xorsat_gray_scan_words<4>(inst, visit); break;
    case 5:
    case 6: detail::xorsat_gray_scan_words<6>(inst, visit); break;
    case 7:
    case 8: detail::xorsat_gray_scan_words<8>(inst, visit); break;
    default:
        if (words <= 16) {
            detail::xorsat_gray_scan_words<16>(inst, visit);
        } else if (words <= 64) {
            detail::xorsat_gray_scan_words<64>(inst, visit);
        } else {
            throw CapacityError("Gray-code scan supports at most 4096 clauses");
        }
    }
}

/// Dense counterpart: visit(bits, energy) where energy is the running incremental value
/// of dense_cost. Per-tuple signed terms are negated on each flip; the running sum is
/// rebuilt from the terms every 4096 steps to bound rounding drift.
template <typename F>
void for_each_dense_cost(const DenseSpinInstance& inst, F&& visit) {
    const std::size_t n = inst.n();
    if (n > kGrayScanLimit) {
        throw CapacityError("Gray-code scan over more than 2^40 configurations");
    }
    const std::size_t t = inst.num_tuples();
    std::vector<double> term(inst.couplings().begin(), inst.couplings().end());
    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t k = 0; k < t; ++k) {
        for (const Vertex v : inst.tuple(k)) {
            ++offsets[v + 1];
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        offsets[v + 1] += offsets[v];
    }
    std::vector<std::uint32_t> tuples_of(offsets[n]);
    {
        auto fill = offsets;
        for (std::size_t k = 0; k < t; ++k) {
            for (const Vertex v : inst.tuple(k)) {
                tuples_of[fill[v]++] = static_cast<std::uint32_t>(k);
            }
        }
    }
    auto resum = [&] {
        double s = 0.0;
        for (const double x : term) {
            s += x;
        }
        return s;
    };

    const double scale = inst.scaling();
    double raw = resum();
    std::uint64_t bits = 0;
    visit(bits, scale * raw);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto v = static_cast<std::size_t>(std::countr_zero(k));
        bits ^= std::uint64_t{1} << v;
        double delta = 0.0;
        for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i) {
            double& x = term[tuples_of[i]];
            delta += x;
            x = -x;
        }
        raw -= 2.0 * delta;
        if ((k & 4095) == 0) {
            raw = resum();
        }
        visit(bits, scale * raw);
    }
}

} // namespace ogplab
