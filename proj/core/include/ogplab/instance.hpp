#pragma once

#include "ogplab/hypergraph.hpp"
#include "ogplab/rng.hpp"
#include "ogplab/spin_config.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ogplab {

/// Max-q-XORSAT instance: a hypergraph with a sign J_e in {-1,+1} per edge.
/// Clause e is satisfied when the product of its spins equals J_e.
class XorsatInstance {
public:
    XorsatInstance(Hypergraph graph, std::vector<std::int8_t> couplings);

    const Hypergraph& graph() const noexcept { return graph_; }
    std::span<const std::int8_t> couplings() const noexcept { return couplings_; }

    std::size_t n() const noexcept { return graph_.n(); }
    std::size_t q() const noexcept { return graph_.q(); }
    std::size_t num_edges() const noexcept { return graph_.num_edges(); }

    /// Cost is invariant under z -> -z exactly when q is even.
    bool z2_symmetric() const noexcept { return q() % 2 == 0; }

private:
    Hypergraph graph_;
    std::vector<std::int8_t> couplings_;
};

enum class DenseModel { Sk, QSpin };

/// Fully connected q-spin glass with one Gaussian coupling per strictly increasing
/// q-tuple, stored in lexicographic tuple order.
///
///   H(z) = scaling * sum_{i1<...<iq} J_{i1..iq} z_{i1} ... z_{iq}
///
/// scaling is 1/sqrt(n) for the SK model (q = 2) and sqrt(q! / (2 n^(q-1))) for
/// the q-spin model; the two coincide at q = 2.
class DenseSpinInstance {
public:
    DenseSpinInstance(DenseModel model, std::size_t n, std::size_t q, std::vector<double> couplings);

    /// Couplings J_k = standard_normal_at(seed, k) for tuple index k.
    static DenseSpinInstance sk(std::size_t n, Seed seed);
    static DenseSpinInstance qspin(std::size_t n, std::size_t q, Seed seed);

    DenseModel model() const noexcept { return model_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t q() const noexcept { return q_; }
    double scaling() const noexcept { return scaling_; }
    std::span<const double> couplings() const noexcept { return couplings_; }
    std::size_t num_tuples() const noexcept { return couplings_.size(); }
    std::span<const Vertex> tuple(std::size_t k) const noexcept { return {tuples_.data() + k * q_, q_}; }

    bool z2_symmetric() const noexcept { return q_ % 2 == 0; }

private:
    DenseModel model_;
    std::size_t n_;
    std::size_t q_;
    double scaling_;
    std::vector<double> couplings_;
    std::vector<Vertex> tuples_;
};

double dense_scaling(DenseModel model, std::size_t n, std::size_t q);

/// Lexicographic rank of a strictly increasing q-tuple among all q-subsets of [0, n).
std::uint64_t tuple_rank(std::span<const Vertex> tuple, std::size_t n);

using Instance = std::variant<XorsatInstance, DenseSpinInstance>;

inline std::size_t instance_size(const Instance& inst) {
    return std::visit([](const auto& i) { return i.n(); }, inst);
}

struct InstanceStats {
    /// delta = |E| / n.
    double clause_density = 0.0;
    /// lambda = q |E| / n.
    double average_degree = 0.0;
};

InstanceStats instance_stats(const XorsatInstance& inst);

/// i.i.d. uniform +-1 per edge.
XorsatInstance random_couplings(const Hypergraph& g, Seed seed);

/// Number of satisfied clauses.
std::size_t xorsat_cost(const XorsatInstance& inst, const SpinConfig& z);

/// xorsat_cost / |E|; requires a nonempty edge set.
double cut_fraction(const XorsatInstance& inst, const SpinConfig& z);

double dense_cost(const DenseSpinInstance& inst, const SpinConfig& z);

/// Consistency of sum_{i in e} b_i = t_e (mod 2), t_e = [J_e == -1], by elimination
/// over GF(2).
bool is_satisfiable(const XorsatInstance& inst);

/// A configuration satisfying every clause, when one exists (free variables set to +1).
std::optional<SpinConfig> satisfying_assignment(const XorsatInstance& inst);

// Text formats. XORSAT: hypergraph block then one line of |E| couplings.
// Dense: header "q n" then one line "i1 ... iq value" per tuple.
void write_xorsat_instance(std::ostream& os, const XorsatInstance& inst);
XorsatInstance read_xorsat_instance(std::istream& is);
void write_dense_instance(std::ostream& os, const DenseSpinInstance& inst);
DenseSpinInstance read_dense_instance(std::istream& is);

/// Dispatches on the header: three integers for XORSAT, two for dense.
Instance read_instance(std::istream& is);
void write_instance(std::ostream& os, const Instance& inst);

} // namespace ogplab
