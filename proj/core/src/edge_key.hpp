#pragma once

#include "ogplab/hypergraph.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ogplab::detail {

using EdgeKey = std::vector<Vertex>;

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const noexcept {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (const Vertex v : e) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(splitmix64(h));
    }
};

using EdgeSet = std::unordered_set<EdgeKey, EdgeKeyHash>;
using EdgeCount = std::unordered_map<EdgeKey, std::size_t, EdgeKeyHash>;

inline EdgeKey sorted_key(std::span<const Vertex> e) {
    EdgeKey k(e.begin(), e.end());
    std::sort(k.begin(), k.end());
    return k;
}

/// Number of entries equal to an earlier entry, for a sorted key.
inline std::size_t repeats(const EdgeKey& sorted) noexcept {
    std::size_t r = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        r += sorted[i] == sorted[i - 1];
    }
    return r;
}

/// Calls f(span) for every q-subset of [0, n) in lexicographic order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t q, F&& f) {
    if (q > n) {
        return;
    }
    std::vector<Vertex> c(q);
    for (std::size_t i = 0; i < q; ++i) {
        c[i] = static_cast<Vertex>(i);
    }
    while (true) {
        f(std::span<const Vertex>(c));
        std::size_t i = q;
        while (i > 0 && c[i - 1] == n - q + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++c[i - 1];
        for (std::size_t j = i; j < q; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Sorts edge tuples lexicographically and flattens them.
std::vector<Vertex> flatten_sorted(std::vector<EdgeKey> edges);

} // namespace ogplab::detail
