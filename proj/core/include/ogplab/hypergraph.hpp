#pragma once

#include "ogplab/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ogplab {

using Vertex = std::uint32_t;

/// A simple, undirected q-uniform hypergraph on vertices [0, n).
///
/// Every edge is stored as a strictly increasing q-tuple, and no edge appears twice.
/// Edge order is the order given at construction; the generators emit edges in
/// lexicographic order.
class Hypergraph {
public:
    /// Edgeless hypergraph.
    Hypergraph(std::size_t n, std::size_t q);

    /// Takes m*q vertex indices, q per edge. Each tuple is sorted into canonical
    /// form; throws ParameterError on repeated vertices, out-of-range indices or
    /// duplicate edges.
    Hypergraph(std::size_t n, std::size_t q, std::vector<Vertex> flat_edges);

    static Hypergraph from_edges(std::size_t n, std::size_t q,
                                 const std::vector<std::vector<Vertex>>& edges);

    std::size_t n() const noexcept { return n_; }
    std::size_t q() const noexcept { return q_; }
    std::size_t num_edges() const noexcept { return q_ == 0 ? 0 : flat_.size() / q_; }

    std::span<const Vertex> edge(std::size_t e) const noexcept {
        return {flat_.data() + e * q_, q_};
    }
    std::span<const Vertex> flat_edges() const noexcept { return flat_; }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    std::size_t n_;
    std::size_t q_;
    std::vector<Vertex> flat_;
};

/// Vertex -> incident edge ids, in compressed row form.
class Incidence {
public:
    explicit Incidence(const Hypergraph& g);

    std::span<const std::uint32_t> edges_of(Vertex v) const noexcept {
        return {ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> ids_;
};

struct DegreeProfile {
    std::vector<std::size_t> degrees;
    std::size_t min = 0;
    std::size_t max = 0;
    /// lambda = q*m/n.
    double mean = 0.0;
};

DegreeProfile degree_profile(const Hypergraph& g);

/// Ball of radius `radius` hyperedge hops around `root`.
///
/// `edges` holds the explored hyperedges (those incident to a vertex strictly inside
/// the ball). `is_tree` is false as soon as the breadth-first expansion on the
/// vertex/edge incidence graph reaches a node a second time.
struct Neighborhood {
    Vertex root = 0;
    std::size_t radius = 0;
    std::vector<Vertex> vertices;
    std::vector<std::uint32_t> edges;
    /// Hop distance of each entry of `vertices`.
    std::vector<std::size_t> depth;
    bool is_tree = true;
};

Neighborhood neighborhood(const Hypergraph& g, Vertex v, std::size_t radius);
Neighborhood neighborhood(const Hypergraph& g, const Incidence& inc, Vertex v, std::size_t radius);

/// Same answer as neighborhood(...).is_tree, stopping at the first revisit.
bool is_treelike_at(const Hypergraph& g, const Incidence& inc, Vertex v, std::size_t radius);

/// Fraction of vertices whose radius-p neighborhood is a hypertree. Empty graph: 1.
double treelike_fraction(const Hypergraph& g, std::size_t radius);

/// Length of the shortest Berge cycle; nullopt for a hyperforest.
std::optional<std::size_t> girth(const Hypergraph& g);

/// Upper bound on the girth of a d-regular q-uniform hypergraph on n vertices:
/// 2 log n / (log(q-1) + log(d-1)) + 2. Infinite when the denominator vanishes.
double girth_upper_bound(std::size_t n, std::size_t d, std::size_t q);

/// Level-by-level estimate of the probability that a radius-p ball in a
/// lambda-regular q-uniform hypergraph is a tree:
/// max(0, 1 - sum_k ((q-1)lambda)^k / (n - 1 - sum_{j<k} ((q-1)lambda)^j)).
double regular_treelike_probability(std::size_t n, double lambda, std::size_t q, std::size_t p);

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

// Generators. All are deterministic in (parameters, seed).

/// Uniform simple hypergraph with exactly m edges.
Hypergraph gen_er_nm(std::size_t n, std::size_t m, std::size_t q, Seed seed);

/// Each q-subset included independently with probability edge_prob.
Hypergraph gen_er_np(std::size_t n, double edge_prob, std::size_t q, Seed seed);

/// d-regular simple hypergraph from the configuration model. Whole matchings are
/// resampled up to 100 times; after that, defects are repaired by vertex swaps
/// between edges.
Hypergraph gen_regular(std::size_t n, std::size_t d, std::size_t q, Seed seed);

// Text format: header "q n m", then m lines of q vertex indices.
void write_hypergraph(std::ostream& os, const Hypergraph& g);
Hypergraph read_hypergraph(std::istream& is);

} // namespace ogplab
