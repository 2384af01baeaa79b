#pragma once

// Slow reference implementations used as test oracles. None of them share code with
// the library's incremental or packed kernels.

#include "ogplab/hypergraph.hpp"
#include "ogplab/instance.hpp"
#include "ogplab/qaoa.hpp"
#include "ogplab/spin_config.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using ogplab::Vertex;

inline std::vector<int> spins_of(std::uint64_t bits, std::size_t n) {
    std::vector<int> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = ((bits >> i) & 1U) != 0 ? -1 : 1;
    }
    return z;
}

/// Clause-by-clause product of spins.
inline std::size_t xorsat_cost(const ogplab::XorsatInstance& inst, const std::vector<int>& z) {
    std::size_t sat = 0;
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        int prod = 1;
        for (const Vertex v : inst.graph().edge(e)) {
            prod *= z[v];
        }
        sat += prod == inst.couplings()[e] ? 1 : 0;
    }
    return sat;
}

/// Nested loops over all increasing tuples, generated independently of the instance's
/// tuple table.
inline double dense_cost(const ogplab::DenseSpinInstance& inst, const std::vector<int>& z) {
    const std::size_t n = inst.n();
    const std::size_t q = inst.q();
    std::vector<std::size_t> idx(q);
    std::size_t k = 0;
    double sum = 0.0;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
        if (depth == q) {
            double prod = inst.couplings()[k++];
            for (const auto i : idx) {
                prod *= z[i];
            }
            sum += prod;
            return;
        }
        for (std::size_t i = from; i < n; ++i) {
            idx[depth] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return inst.scaling() * sum;
}

/// All 2^n costs, each computed from scratch.
inline std::vector<double> xorsat_costs(const ogplab::XorsatInstance& inst) {
    const std::size_t n = inst.n();
    std::vector<std::uint64_t> masks;
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        std::uint64_t m = 0;
        for (const Vertex v : inst.graph().edge(e)) {
            m |= std::uint64_t{1} << v;
        }
        masks.push_back(m);
    }
    std::vector<double> out(std::size_t{1} << n);
    for (std::uint64_t b = 0; b < out.size(); ++b) {
        std::size_t sat = 0;
        for (std::size_t e = 0; e < masks.size(); ++e) {
            const bool odd = (__builtin_popcountll(b & masks[e]) & 1) != 0;
            sat += odd == (inst.couplings()[e] < 0) ? 1 : 0;
        }
        out[b] = static_cast<double>(sat);
    }
    return out;
}

inline std::vector<double> dense_costs(const ogplab::DenseSpinInstance& inst) {
    std::vector<double> out(std::size_t{1} << inst.n());
    for (std::uint64_t b = 0; b < out.size(); ++b) {
        out[b] = dense_cost(inst, spins_of(b, inst.n()));
    }
    return out;
}

/// Configurations (as packed bits) with cost >= cutoff.
inline std::vector<std::uint64_t> filter(const std::vector<double>& costs, double cutoff) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t b = 0; b < costs.size(); ++b) {
        if (costs[b] >= cutoff) {
            out.push_back(b);
        }
    }
    return out;
}

/// Explicit dense-matrix QAOA: diag(e^{-i gamma C}) and the full 2^n x 2^n mixer
/// prod_j (cos beta I - i sin beta X_j), applied by matrix-vector products.
inline std::vector<std::complex<double>> qaoa_state(const std::vector<double>& cost, std::size_t n,
                                                    const ogplab::qaoa::Params& prm) {
    using C = std::complex<double>;
    const std::size_t dim = std::size_t{1} << n;
    std::vector<C> psi(dim, C(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    std::vector<C> mixer(dim * dim);
    for (std::size_t layer = 0; layer < prm.depth(); ++layer) {
        const double g = prm.gammas[layer];
        const double b = prm.betas[layer];
        std::vector<C> phase(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            phase[i] = std::exp(C(0.0, -g * cost[i]));
        }
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                // Kronecker product entry: one factor per qubit.
                C entry(1.0, 0.0);
                for (std::size_t j = 0; j < n; ++j) {
                    const bool same = ((r >> j) & 1U) == ((c >> j) & 1U);
                    entry *= same ? C(std::cos(b), 0.0) : C(0.0, -std::sin(b));
                }
                mixer[r * dim + c] = entry;
            }
        }
        std::vector<C> tmp(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            tmp[i] = phase[i] * psi[i];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            C acc(0.0, 0.0);
            for (std::size_t c = 0; c < dim; ++c) {
                acc += mixer[r * dim + c] * tmp[c];
            }
            psi[r] = acc;
        }
    }
    return psi;
}

inline double qaoa_expectation(const std::vector<double>& cost, std::size_t n, const ogplab::qaoa::Params& prm) {
    const auto psi = qaoa_state(cost, n, prm);
    double e = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        e += std::norm(psi[i]) * cost[i];
    }
    return e;
}

/// True when some vertex of the radius-p ball is reachable from the root along two
/// different non-backtracking vertex/edge walks of length <= p hyperedges. Enumerates
/// the walks explicitly.
inline bool ball_has_cycle(const ogplab::Hypergraph& g, Vertex root, std::size_t p) {
    struct Walk {
        std::vector<Vertex> vertices;
        std::vector<std::size_t> edges;
    };
    std::vector<Walk> frontier{{{root}, {}}};
    std::set<std::vector<std::size_t>> seen_edges_paths;
    std::vector<std::pair<Vertex, std::vector<std::size_t>>> reached{{root, {}}};
    for (std::size_t step = 0; step < p; ++step) {
        std::vector<Walk> next;
        for (const auto& w : frontier) {
            const Vertex tip = w.vertices.back();
            for (std::size_t e = 0; e < g.num_edges(); ++e) {
                const auto edge = g.edge(e);
                if (std::find(edge.begin(), edge.end(), tip) == edge.end()) {
                    continue;
                }
                if (!w.edges.empty() && w.edges.back() == e) {
                    continue;
                }
                for (const Vertex u : edge) {
                    if (u == tip) {
                        continue;
                    }
                    Walk x = w;
                    x.vertices.push_back(u);
                    x.edges.push_back(e);
                    reached.emplace_back(u, x.edges);
                    next.push_back(std::move(x));
                }
            }
        }
        frontier = std::move(next);
    }
    // Two distinct edge paths to the same vertex, or a walk that returns to a vertex
    // already on it, close a cycle.
    for (std::size_t a = 0; a < reached.size(); ++a) {
        for (std::size_t b = a + 1; b < reached.size(); ++b) {
            if (reached[a].first == reached[b].first && reached[a].second != reached[b].second) {
                return true;
            }
        }
    }
    return false;
}

} // namespace oracle
