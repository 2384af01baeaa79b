#include "ogplab/regularize.hpp"

#include "edge_key.hpp"
#include "ogplab/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <bit>
#include <limits>

namespace ogplab {

std::size_t lambda_prime(double lambda) {
    if (!(lambda > 0.0)) {
        throw ParameterError(fmt::format("average degree {} must be positive", lambda));
    }
    return static_cast<std::size_t>(std::ceil(lambda + std::sqrt(lambda) * std::log(lambda)));
}

TrimResult trim(const Hypergraph& g, std::size_t lambda_prime, Seed seed) {
    if (lambda_prime < 1) {
        throw ParameterError("lambda' must be at least 1");
    }
    const Incidence inc(g);
    std::vector<std::size_t> degree(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        degree[v] = inc.degree(v);
    }
    std::vector<Vertex> order(g.n());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return degree[a] > degree[b]; });

    Rng rng = make_rng(seed);
    std::vector<char> alive(g.num_edges(), 1);
    std::vector<std::uint32_t> live;
    std::size_t removed = 0;
    for (const Vertex v : order) {
        while (degree[v] > lambda_prime) {
            live.clear();
            for (const std::uint32_t e : inc.edges_of(v)) {
                if (alive[e] != 0) {
                    live.push_back(e);
                }
            }
            const std::uint32_t victim = live[uniform_below(rng, live.size())];
            alive[victim] = 0;
            ++removed;
            for (const Vertex w : g.edge(victim)) {
                --degree[w];
            }
        }
    }

    std::vector<Vertex> flat;
    flat.reserve((g.num_edges() - removed) * g.q());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        if (alive[e] != 0) {
            const auto edge = g.edge(e);
            flat.insert(flat.end(), edge.begin(), edge.end());
        }
    }
    return {Hypergraph(g.n(), g.q(), std::move(flat)), removed};
}

namespace {

/// Fenwick tree over non-negative integer weights for proportional sampling.
class WeightTree {
public:
    explicit WeightTree(std::size_t n) : tree_(n + 1, 0), weight_(n, 0) {}

    void set(std::size_t i, std::int64_t w) {
        const std::int64_t delta = w - weight_[i];
        weight_[i] = w;
        total_ += delta;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
            tree_[k] += delta;
        }
    }

    std::int64_t weight(std::size_t i) const { return weight_[i]; }
    std::int64_t total() const { return total_; }

    /// Index i with prefix(i) <= r < prefix(i+1); requires 0 <= r < total().
    std::size_t find(std::int64_t r) const {
        std::size_t pos = 0;
        std::size_t step = std::bit_floor(tree_.size() - 1);
        for (; step > 0; step >>= 1) {
            if (pos + step < tree_.size() && tree_[pos + step] <= r) {
                pos += step;
                r -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::int64_t> tree_;
    std::vector<std::int64_t> weight_;
    std::int64_t total_ = 0;
};

class FillState {
public:
    FillState(const Hypergraph& g, std::size_t lambda_prime, Seed seed)
        : n_(g.n()), q_(g.q()), target_(lambda_prime), rng_(make_rng(seed)), weights_(g.n()) {
        std::vector<std::size_t> degree(n_, 0);
        for (const Vertex v : g.flat_edges()) {
            ++degree[v];
        }
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            const auto edge = g.edge(e);
            edges_.emplace_back(edge.begin(), edge.end());
            present_.insert(edges_.back());
        }
        for (std::size_t v = 0; v < n_; ++v) {
            if (degree[v] > target_) {
                throw ParameterError(
                    fmt::format("vertex {} has degree {} above lambda'={}; trim first", v, degree[v], target_));
            }
            set_deficit(v, static_cast<std::int64_t>(target_ - degree[v]));
        }
    }

    std::size_t deficit_total() const { return static_cast<std::size_t>(weights_.total()); }

    void run() {
        constexpr int kRedrawCap = 1000;
        while (positive_ >= q_) {
            int redraws = 0;
            while (true) {
                auto e = draw_proportional();
                if (!present_.contains(e)) {
                    insert(std::move(e));
                    break;
                }
                if (++redraws >= kRedrawCap) {
                    throw GenerationError("fill could not place a non-duplicate edge", redraws);
                }
            }
        }
        while (deficit_total() >= q_) {
            split_repair();
        }
    }

    Hypergraph graph() const {
        return Hypergraph(n_, q_, detail::flatten_sorted(edges_));
    }

    std::size_t edge_count() const { return edges_.size(); }

private:
    void set_deficit(std::size_t v, std::int64_t d) {
        const bool was = weights_.weight(v) > 0;
        weights_.set(v, d);
        const bool now = d > 0;
        if (was != now) {
            positive_ += now ? 1 : -1;
        }
    }

    detail::EdgeKey draw_proportional() {
        detail::EdgeKey e;
        e.reserve(q_);
        std::vector<std::int64_t> saved;
        saved.reserve(q_);
        for (std::size_t k = 0; k < q_; ++k) {
            const auto r = static_cast<std::int64_t>(uniform_below(rng_, static_cast<std::uint64_t>(weights_.total())));
            const std::size_t v = weights_.find(r);
            e.push_back(static_cast<Vertex>(v));
            saved.push_back(weights_.weight(v));
            weights_.set(v, 0);
        }
        for (std::size_t k = 0; k < q_; ++k) {
            weights_.set(e[k], saved[k]);
        }
        std::sort(e.begin(), e.end());
        return e;
    }

    void insert(detail::EdgeKey e) {
        for (const Vertex v : e) {
            set_deficit(v, weights_.weight(v) - 1);
        }
        present_.insert(e);
        edges_.push_back(std::move(e));
    }

    /// Fewer than q vertices still have a deficit. Replace k disjoint edges avoiding
    /// them by k+1 edges that reuse the same vertices plus q deficit stubs.
    void split_repair() {
        std::vector<Vertex> positive;
        for (std::size_t v = 0; v < n_; ++v) {
            if (weights_.weight(v) > 0) {
                positive.push_back(static_cast<Vertex>(v));
            }
        }
        // Spread q stubs as evenly as the deficits allow.
        std::vector<std::size_t> take(positive.size(), 0);
        for (std::size_t placed = 0; placed < q_;) {
            for (std::size_t i = 0; i < positive.size() && placed < q_; ++i) {
                if (static_cast<std::int64_t>(take[i]) < weights_.weight(positive[i])) {
                    ++take[i];
                    ++placed;
                }
            }
        }
        const std::size_t multiplicity = *std::max_element(take.begin(), take.end());
        const std::size_t k = std::max<std::size_t>(1, multiplicity - 1);
        std::vector<Vertex> slots;
        for (std::size_t i = 0; i < positive.size(); ++i) {
            slots.insert(slots.end(), take[i], positive[i]);
        }

        constexpr int kAttemptCap = 1000;
        for (int attempt = 1; attempt <= kAttemptCap; ++attempt) {
            if (edges_.size() < k) {
                break;
            }
            std::vector<std::size_t> chosen;
            std::vector<Vertex> pool;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                const std::size_t idx = uniform_below(rng_, edges_.size());
                const auto& e = edges_[idx];
                ok = std::find(chosen.begin(), chosen.end(), idx) == chosen.end();
                for (const Vertex v : e) {
                    ok = ok && weights_.weight(v) == 0 &&
                         std::find(pool.begin(), pool.end(), v) == pool.end();
                }
                if (ok) {
                    chosen.push_back(idx);
                    pool.insert(pool.end(), e.begin(), e.end());
                }
            }
            if (!ok) {
                continue;
            }
            std::shuffle(pool.begin(), pool.end(), rng_);
            std::vector<detail::EdgeKey> fresh(k + 1);
            for (std::size_t s = 0; s < slots.size(); ++s) {
                fresh[s % (k + 1)].push_back(slots[s]);
            }
            std::size_t cursor = 0;
            for (auto& e : fresh) {
                while (e.size() < q_) {
                    e.push_back(pool[cursor++]);
                }
                std::sort(e.begin(), e.end());
            }
            detail::EdgeSet removed;
            for (const std::size_t idx : chosen) {
                removed.insert(edges_[idx]);
            }
            bool clash = false;
            for (std::size_t a = 0; a < fresh.size() && !clash; ++a) {
                clash = (present_.contains(fresh[a]) && !removed.contains(fresh[a]));
                for (std::size_t b = 0; b < a && !clash; ++b) {
                    clash = fresh[a] == fresh[b];
                }
            }
            if (clash) {
                continue;
            }
            std::sort(chosen.begin(), chosen.end(), std::greater<>());
            for (const std::size_t idx : chosen) {
                present_.erase(edges_[idx]);
                edges_[idx] = std::move(edges_.back());
                edges_.pop_back();
            }
            for (const Vertex v : slots) {
                set_deficit(v, weights_.weight(v) - 1);
            }
            for (auto& e : fresh) {
                present_.insert(e);
                edges_.push_back(std::move(e));
            }
            return;
        }
        throw GenerationError("fill could not split edges to place the residual deficit", kAttemptCap);
    }

    std::size_t n_;
    std::size_t q_;
    std::size_t target_;
    Rng rng_;
    WeightTree weights_;
    std::size_t positive_ = 0;
    std::vector<detail::EdgeKey> edges_;
    detail::EdgeSet present_;
};

} // namespace

FillResult fill(const Hypergraph& g, std::size_t lambda_prime, Seed seed) {
    FillState state(g, lambda_prime, seed);
    state.run();
    const std::size_t added = state.edge_count() - g.num_edges();
    const std::size_t leftover = state.deficit_total();
    return {state.graph(), added, leftover};
}

RegularizeResult regularize(const Hypergraph& g, double lambda, std::size_t p_radius, Seed seed) {
    if (!(lambda >= 2.0)) {
        throw ParameterError(fmt::format("regularize needs lambda >= 2, got {}", lambda));
    }
    RegularizeReport report;
    report.lambda_input = lambda;
    report.lambda_prime = lambda_prime(lambda);
    report.treelike_before = treelike_fraction(g, p_radius);

    auto trimmed = trim(g, report.lambda_prime, derive_seed(seed, "trim"));
    auto filled = fill(trimmed.graph, report.lambda_prime, derive_seed(seed, "fill"));

    report.edges_removed = trimmed.removed;
    report.edges_added = filled.added;
    report.removed_fraction =
        g.num_edges() == 0 ? 0.0 : static_cast<double>(trimmed.removed) / static_cast<double>(g.num_edges());
    report.leftover_deficit = filled.leftover_deficit;
    report.treelike_after = treelike_fraction(filled.graph, p_radius);
    return {std::move(filled.graph), report};
}

double mean_degree_excess(const Hypergraph& g, std::size_t lambda_prime) {
    const auto profile = degree_profile(g);
    double total = 0.0;
    for (const std::size_t d : profile.degrees) {
        total += d > lambda_prime ? static_cast<double>(d - lambda_prime) : 0.0;
    }
    return total / static_cast<double>(g.n());
}

double degree_excess_envelope(double lambda_prime) {
    if (!(lambda_prime > 0.0)) {
        throw ParameterError("lambda' must be positive");
    }
    boost::math::quadrature::exp_sinh<double> integrator;
    auto tail = [lambda_prime](double t) { return 2.0 * std::exp(-(t * t) / (3.0 * lambda_prime)); };
    // Substituting t = x - lambda' maps the range onto [0, inf).
    return integrator.integrate(tail, 0.0, std::numeric_limits<double>::infinity());
}

} // namespace ogplab
