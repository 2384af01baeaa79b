#include "ogplab/instance.hpp"

#include "edge_key.hpp"
#include "ogplab/error.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace ogplab {

XorsatInstance::XorsatInstance(Hypergraph graph, std::vector<std::int8_t> couplings)
    : graph_(std::move(graph)), couplings_(std::move(couplings)) {
    if (couplings_.size() != graph_.num_edges()) {
        throw ParameterError(
            fmt::format("{} couplings for {} edges", couplings_.size(), graph_.num_edges()));
    }
    for (std::size_t e = 0; e < couplings_.size(); ++e) {
        if (couplings_[e] != 1 && couplings_[e] != -1) {
            throw ParameterError(fmt::format("coupling {} is {}, expected +1 or -1", e, couplings_[e]));
        }
    }
}

double dense_scaling(DenseModel model, std::size_t n, std::size_t q) {
    const double nd = static_cast<double>(n);
    if (model == DenseModel::Sk) {
        return 1.0 / std::sqrt(nd);
    }
    const double qf = std::tgamma(static_cast<double>(q) + 1.0);
    return std::sqrt(qf / (2.0 * std::pow(nd, static_cast<double>(q) - 1.0)));
}

DenseSpinInstance::DenseSpinInstance(DenseModel model, std::size_t n, std::size_t q, std::vector<double> couplings)
    : model_(model), n_(n), q_(q), scaling_(0.0), couplings_(std::move(couplings)) {
    if (q < 2 || q > n) {
        throw ParameterError(fmt::format("dense instance needs 2 <= q <= n, got q={} n={}", q, n));
    }
    if (model == DenseModel::Sk && q != 2) {
        throw ParameterError("the SK model has q = 2");
    }
    const std::uint64_t expected = binomial(n, q);
    if (couplings_.size() != expected) {
        throw ParameterError(fmt::format("{} couplings, expected C({}, {}) = {}", couplings_.size(), n, q, expected));
    }
    scaling_ = dense_scaling(model, n, q);
    tuples_.reserve(couplings_.size() * q);
    detail::for_each_combination(n, q, [&](std::span<const Vertex> c) { tuples_.insert(tuples_.end(), c.begin(), c.end()); });
}

namespace {

std::vector<double> gaussian_couplings(std::size_t n, std::size_t q, Seed seed) {
    const std::uint64_t count = binomial(n, q);
    if (count > (std::uint64_t{1} << 28)) {
        throw ParameterError(fmt::format("C({}, {}) couplings is too many to store", n, q));
    }
    std::vector<double> j(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        j[k] = standard_normal_at(seed, k);
    }
    return j;
}

} // namespace

DenseSpinInstance DenseSpinInstance::sk(std::size_t n, Seed seed) {
    return DenseSpinInstance(DenseModel::Sk, n, 2, gaussian_couplings(n, 2, seed));
}

DenseSpinInstance DenseSpinInstance::qspin(std::size_t n, std::size_t q, Seed seed) {
    if (q < 2 || q > n) {
        throw ParameterError(fmt::format("dense instance needs 2 <= q <= n, got q={} n={}", q, n));
    }
    return DenseSpinInstance(DenseModel::QSpin, n, q, gaussian_couplings(n, q, seed));
}

std::uint64_t tuple_rank(std::span<const Vertex> tuple, std::size_t n) {
    // Count the subsets that precede `tuple` position by position.
    const std::size_t q = tuple.size();
    std::uint64_t rank = 0;
    Vertex prev = 0;
    for (std::size_t i = 0; i < q; ++i) {
        const Vertex start = i == 0 ? 0 : prev + 1;
        for (Vertex v = start; v < tuple[i]; ++v) {
            rank += binomial(n - v - 1, q - i - 1);
        }
        prev = tuple[i];
    }
    return rank;
}

InstanceStats instance_stats(const XorsatInstance& inst) {
    const double m = static_cast<double>(inst.num_edges());
    const double n = static_cast<double>(inst.n());
    return {m / n, static_cast<double>(inst.q()) * m / n};
}

XorsatInstance random_couplings(const Hypergraph& g, Seed seed) {
    Rng rng = make_rng(seed);
    std::vector<std::int8_t> j(g.num_edges());
    for (auto& x : j) {
        x = (rng() >> 63) != 0 ? std::int8_t{-1} : std::int8_t{1};
    }
    return XorsatInstance(g, std::move(j));
}

namespace {

void check_length(std::size_t expected, const SpinConfig& z) {
    if (z.size() != expected) {
        throw ContractViolation(fmt::format("configuration has {} spins, instance has {}", z.size(), expected));
    }
}

} // namespace

std::size_t xorsat_cost(const XorsatInstance& inst, const SpinConfig& z) {
    check_length(inst.n(), z);
    const auto& g = inst.graph();
    const auto j = inst.couplings();
    std::size_t satisfied = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        bool parity = false;
        for (const Vertex v : g.edge(e)) {
            parity ^= z.bit(v);
        }
        // parity 0 <=> product of spins is +1.
        satisfied += parity == (j[e] < 0) ? 1 : 0;
    }
    return satisfied;
}

double cut_fraction(const XorsatInstance& inst, const SpinConfig& z) {
    if (inst.num_edges() == 0) {
        throw ContractViolation("cut fraction is undefined without clauses");
    }
    return static_cast<double>(xorsat_cost(inst, z)) / static_cast<double>(inst.num_edges());
}

double dense_cost(const DenseSpinInstance& inst, const SpinConfig& z) {
    check_length(inst.n(), z);
    const auto j = inst.couplings();
    double sum = 0.0;
    for (std::size_t k = 0; k < j.size(); ++k) {
        bool parity = false;
        for (const Vertex v : inst.tuple(k)) {
            parity ^= z.bit(v);
        }
        sum += parity ? -j[k] : j[k];
    }
    return inst.scaling() * sum;
}

namespace {

/// Reduced row echelon form of the clause system; nullopt when inconsistent.
std::optional<SpinConfig> solve_parity_system(const XorsatInstance& inst) {
    const std::size_t n = inst.n();
    const std::size_t words = (n + 1 + 63) / 64;
    const std::size_t rhs_word = n / 64;
    const std::uint64_t rhs_bit = std::uint64_t{1} << (n % 64);
    const auto& g = inst.graph();

    std::vector<std::vector<std::uint64_t>> rows(g.num_edges(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        for (const Vertex v : g.edge(e)) {
            rows[e][v / 64] ^= std::uint64_t{1} << (v % 64);
        }
        if (inst.couplings()[e] < 0) {
            rows[e][rhs_word] |= rhs_bit;
        }
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
        const std::size_t w = col / 64;
        const std::uint64_t b = std::uint64_t{1} << (col % 64);
        std::size_t pivot = rank;
        while (pivot < rows.size() && (rows[pivot][w] & b) == 0) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != rank && (rows[r][w] & b) != 0) {
                for (std::size_t k = 0; k < words; ++k) {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }
    // Rows below the rank have no coefficients left; a set right-hand side is 0 = 1.
    for (std::size_t r = rank; r < rows.size(); ++r) {
        if ((rows[r][rhs_word] & rhs_bit) != 0) {
            return std::nullopt;
        }
    }
    SpinConfig z(n);
    for (std::size_t r = 0; r < rank; ++r) {
        z.set_bit(pivot_col[r], (rows[r][rhs_word] & rhs_bit) != 0);
    }
    return z;
}

} // namespace

bool is_satisfiable(const XorsatInstance& inst) { return solve_parity_system(inst).has_value(); }

std::optional<SpinConfig> satisfying_assignment(const XorsatInstance& inst) { return solve_parity_system(inst); }

void write_xorsat_instance(std::ostream& os, const XorsatInstance& inst) {
    write_hypergraph(os, inst.graph());
    const auto j = inst.couplings();
    for (std::size_t e = 0; e < j.size(); ++e) {
        os << (e == 0 ? "" : " ") << static_cast<int>(j[e]);
    }
    os << '\n';
}

XorsatInstance read_xorsat_instance(std::istream& is) {
    Hypergraph g = read_hypergraph(is);
    std::vector<std::int8_t> j(g.num_edges());
    for (std::size_t e = 0; e < j.size(); ++e) {
        int v = 0;
        if (!(is >> v) || (v != 1 && v != -1)) {
            throw FormatError(fmt::format("coupling #{}: expected +1 or -1", e));
        }
        j[e] = static_cast<std::int8_t>(v);
    }
    return XorsatInstance(std::move(g), std::move(j));
}

void write_dense_instance(std::ostream& os, const DenseSpinInstance& inst) {
    os << inst.q() << ' ' << inst.n() << '\n';
    for (std::size_t k = 0; k < inst.num_tuples(); ++k) {
        for (const Vertex v : inst.tuple(k)) {
            os << v << ' ';
        }
        os << fmt::format("{:.17g}", inst.couplings()[k]) << '\n';
    }
}

namespace {

DenseSpinInstance read_dense_body(std::istream& is, std::size_t q, std::size_t n) {
    if (q < 2 || q > n) {
        throw FormatError(fmt::format("dense header q={} n={} is invalid", q, n));
    }
    const std::uint64_t count = binomial(n, q);
    std::vector<double> j(count, 0.0);
    std::vector<char> seen(count, 0);
    std::vector<Vertex> t(q);
    for (std::uint64_t line = 0; line < count; ++line) {
        for (auto& v : t) {
            long long x = 0;
            if (!(is >> x) || x < 0 || static_cast<std::size_t>(x) >= n) {
                throw FormatError(fmt::format("dense coupling line {}: bad vertex index", line));
            }
            v = static_cast<Vertex>(x);
        }
        double value = 0.0;
        if (!(is >> value)) {
            throw FormatError(fmt::format("dense coupling line {}: missing value", line));
        }
        for (std::size_t i = 1; i < q; ++i) {
            if (t[i] <= t[i - 1]) {
                throw FormatError(fmt::format("dense coupling line {}: tuple not strictly increasing", line));
            }
        }
        const auto r = tuple_rank(t, n);
        if (seen[r] != 0) {
            throw FormatError(fmt::format("dense coupling line {}: repeated tuple", line));
        }
        seen[r] = 1;
        j[r] = value;
    }
    return DenseSpinInstance(q == 2 ? DenseModel::Sk : DenseModel::QSpin, n, q, std::move(j));
}

} // namespace

DenseSpinInstance read_dense_instance(std::istream& is) {
    std::size_t q = 0;
    std::size_t n = 0;
    if (!(is >> q >> n)) {
        throw FormatError("dense header must be 'q n'");
    }
    return read_dense_body(is, q, n);
}

Instance read_instance(std::istream& is) {
    std::string header;
    while (header.find_first_not_of(" \t\r") == std::string::npos) {
        if (!std::getline(is, header)) {
            throw FormatError("empty instance file");
        }
    }
    std::istringstream hs(header);
    std::vector<long long> fields;
    long long x = 0;
    while (hs >> x) {
        fields.push_back(x);
    }
    if (fields.size() == 2) {
        return read_dense_body(is, static_cast<std::size_t>(fields[0]), static_cast<std::size_t>(fields[1]));
    }
    if (fields.size() == 3) {
        std::stringstream rebuilt;
        rebuilt << header << '\n' << is.rdbuf();
        return read_xorsat_instance(rebuilt);
    }
    throw FormatError("instance header must have two (dense) or three (XORSAT) integers");
}

void write_instance(std::ostream& os, const Instance& inst) {
    std::visit(
        [&](const auto& i) {
            if constexpr (std::is_same_v<std::decay_t<decltype(i)>, XorsatInstance>) {
                write_xorsat_instance(os, i);
            } else {
                write_dense_instance(os, i);
            }
        },
        inst);
}

} // namespace ogplab
