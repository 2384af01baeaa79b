#pragma once

#include "ogplab/hypergraph.hpp"
#include "ogplab/rng.hpp"

#include <cstddef>

namespace ogplab {

/// Instrumented outcome of converting an Erdos-Renyi hypergraph into a
/// lambda'-regular one by trimming high-degree vertices and filling deficits.
struct RegularizeReport {
    double lambda_input = 0.0;
    /// ceil(lambda + sqrt(lambda) * ln(lambda)).
    std::size_t lambda_prime = 0;
    std::size_t edges_removed = 0;
    std::size_t edges_added = 0;
    /// edges_removed / (input edge count); 0 for an empty input.
    double removed_fraction = 0.0;
    double treelike_before = 0.0;
    double treelike_after = 0.0;
    std::size_t leftover_deficit = 0;
};

struct TrimResult {
    Hypergraph graph;
    std::size_t removed = 0;
};

struct FillResult {
    Hypergraph graph;
    /// Net increase in edge count.
    std::size_t added = 0;
    /// Stub count still missing at termination; always < q.
    std::size_t leftover_deficit = 0;
};

struct RegularizeResult {
    Hypergraph graph;
    RegularizeReport report;
};

/// ceil(lambda + sqrt(lambda) * ln(lambda)), natural logarithm.
std::size_t lambda_prime(double lambda);

/// Removes whole edges until every degree is at most lambda_prime. Vertices are
/// visited in decreasing-degree order (ties by index); an over-degree vertex loses
/// uniformly random incident edges until compliant.
TrimResult trim(const Hypergraph& g, std::size_t lambda_prime, Seed seed);

/// Adds edges until every degree equals lambda_prime. Each new edge takes q distinct
/// vertices drawn with probability proportional to the current deficit
/// lambda_prime - d_i; duplicates of existing edges are redrawn (at most 1000 times,
/// then GenerationError). When fewer than q vertices still have a deficit but the
/// total deficit is at least q, degree-preserving edge splits place the remainder.
/// Requires max degree <= lambda_prime.
FillResult fill(const Hypergraph& g, std::size_t lambda_prime, Seed seed);

/// trim followed by fill, with tree-likeness measured at `p_radius` before and after.
/// Requires lambda >= 2.
RegularizeResult regularize(const Hypergraph& g, double lambda, std::size_t p_radius, Seed seed);

/// Mean over vertices of max(d_i - lambda_prime, 0).
double mean_degree_excess(const Hypergraph& g, std::size_t lambda_prime);

/// Integral of 2 exp(-(x - lambda')^2 / (3 lambda')) over [lambda', inf), by
/// numerical quadrature. Upper envelope for the expected per-vertex degree excess.
double degree_excess_envelope(double lambda_prime);

} // namespace ogplab
