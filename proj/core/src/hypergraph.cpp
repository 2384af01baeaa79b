#include "ogplab/hypergraph.hpp"

#include "edge_key.hpp"
#include "ogplab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace ogplab {

namespace detail {

std::vector<Vertex> flatten_sorted(std::vector<EdgeKey> edges) {
    std::sort(edges.begin(), edges.end());
    std::vector<Vertex> flat;
    flat.reserve(edges.empty() ? 0 : edges.size() * edges.front().size());
    for (const auto& e : edges) {
        flat.insert(flat.end(), e.begin(), e.end());
    }
    return flat;
}

} // namespace detail

namespace {

void check_shape(std::size_t n, std::size_t q) {
    if (q < 2) {
        throw ParameterError(fmt::format("uniformity q={} must be at least 2", q));
    }
    if (n == 0) {
        throw ParameterError("vertex count must be positive");
    }
    if (n > std::numeric_limits<Vertex>::max()) {
        throw ParameterError("vertex count exceeds the 32-bit index range");
    }
}

} // namespace

Hypergraph::Hypergraph(std::size_t n, std::size_t q) : n_(n), q_(q) { check_shape(n, q); }

Hypergraph::Hypergraph(std::size_t n, std::size_t q, std::vector<Vertex> flat_edges)
    : n_(n), q_(q), flat_(std::move(flat_edges)) {
    check_shape(n, q);
    if (flat_.size() % q != 0) {
        throw ParameterError(fmt::format("{} vertex indices do not split into {}-tuples", flat_.size(), q));
    }
    detail::EdgeSet seen;
    seen.reserve(flat_.size() / q);
    for (std::size_t e = 0; e * q < flat_.size(); ++e) {
        auto first = flat_.begin() + static_cast<std::ptrdiff_t>(e * q);
        std::sort(first, first + static_cast<std::ptrdiff_t>(q));
        for (std::size_t k = 0; k < q; ++k) {
            const Vertex v = first[static_cast<std::ptrdiff_t>(k)];
            if (v >= n) {
                throw ParameterError(fmt::format("edge {} has vertex {} outside [0, {})", e, v, n));
            }
            if (k > 0 && first[static_cast<std::ptrdiff_t>(k - 1)] == v) {
                throw ParameterError(fmt::format("edge {} repeats vertex {}", e, v));
            }
        }
        if (!seen.emplace(first, first + static_cast<std::ptrdiff_t>(q)).second) {
            throw ParameterError(fmt::format("edge {} duplicates an earlier edge", e));
        }
    }
}

Hypergraph Hypergraph::from_edges(std::size_t n, std::size_t q,
                                  const std::vector<std::vector<Vertex>>& edges) {
    std::vector<Vertex> flat;
    flat.reserve(edges.size() * q);
    for (const auto& e : edges) {
        if (e.size() != q) {
            throw ParameterError(fmt::format("edge of size {} in a {}-uniform hypergraph", e.size(), q));
        }
        flat.insert(flat.end(), e.begin(), e.end());
    }
    return Hypergraph(n, q, std::move(flat));
}

Incidence::Incidence(const Hypergraph& g) : offsets_(g.n() + 1, 0) {
    for (const Vertex v : g.flat_edges()) {
        ++offsets_[v + 1];
    }
    for (std::size_t v = 0; v < g.n(); ++v) {
        offsets_[v + 1] += offsets_[v];
    }
    ids_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        for (const Vertex v : g.edge(e)) {
            ids_[cursor[v]++] = static_cast<std::uint32_t>(e);
        }
    }
}

DegreeProfile degree_profile(const Hypergraph& g) {
    DegreeProfile p;
    p.degrees.assign(g.n(), 0);
    for (const Vertex v : g.flat_edges()) {
        ++p.degrees[v];
    }
    const auto [lo, hi] = std::minmax_element(p.degrees.begin(), p.degrees.end());
    p.min = *lo;
    p.max = *hi;
    p.mean = static_cast<double>(g.q() * g.num_edges()) / static_cast<double>(g.n());
    return p;
}

namespace {

constexpr std::uint32_t kNoEdge = std::numeric_limits<std::uint32_t>::max();

/// Reusable scratch space for ball expansions over one graph.
class BallExplorer {
public:
    BallExplorer(const Hypergraph& g, const Incidence& inc)
        : g_(g), inc_(inc), vdepth_(g.n(), kUnseen), parent_(g.n(), kNoEdge), edge_seen_(g.num_edges(), 0) {}

    /// Expands the ball; fills `out` when non-null. Returns the tree flag.
    bool explore(Vertex root, std::size_t radius, Neighborhood* out, bool stop_at_cycle) {
        reset();
        bool tree = true;
        std::deque<Vertex> queue{root};
        visit(root, 0, kNoEdge);
        if (out != nullptr) {
            out->vertices.push_back(root);
            out->depth.push_back(0);
        }
        while (!queue.empty()) {
            const Vertex u = queue.front();
            queue.pop_front();
            const std::size_t du = vdepth_[u];
            if (du >= radius) {
                continue;
            }
            for (const std::uint32_t e : inc_.edges_of(u)) {
                if (e == parent_[u]) {
                    continue;
                }
                if (edge_seen_[e] != 0) {
                    tree = false;
                    if (stop_at_cycle) {
                        return false;
                    }
                    continue;
                }
                edge_seen_[e] = 1;
                touched_edges_.push_back(e);
                if (out != nullptr) {
                    out->edges.push_back(e);
                }
                for (const Vertex w : g_.edge(e)) {
                    if (w == u) {
                        continue;
                    }
                    if (vdepth_[w] != kUnseen) {
                        tree = false;
                        if (stop_at_cycle) {
                            return false;
                        }
                        continue;
                    }
                    visit(w, du + 1, e);
                    if (out != nullptr) {
                        out->vertices.push_back(w);
                        out->depth.push_back(du + 1);
                    }
                    queue.push_back(w);
                }
            }
        }
        return tree;
    }

private:
    static constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

    void visit(Vertex v, std::size_t depth, std::uint32_t via) {
        vdepth_[v] = depth;
        parent_[v] = via;
        touched_vertices_.push_back(v);
    }

    void reset() {
        for (const Vertex v : touched_vertices_) {
            vdepth_[v] = kUnseen;
            parent_[v] = kNoEdge;
        }
        for (const std::uint32_t e : touched_edges_) {
            edge_seen_[e] = 0;
        }
        touched_vertices_.clear();
        touched_edges_.clear();
    }

    const Hypergraph& g_;
    const Incidence& inc_;
    std::vector<std::size_t> vdepth_;
    std::vector<std::uint32_t> parent_;
    std::vector<char> edge_seen_;
    std::vector<Vertex> touched_vertices_;
    std::vector<std::uint32_t> touched_edges_;
};

void check_vertex(const Hypergraph& g, Vertex v) {
    if (v >= g.n()) {
        throw ParameterError(fmt::format("vertex {} outside [0, {})", v, g.n()));
    }
}

} // namespace

Neighborhood neighborhood(const Hypergraph& g, Vertex v, std::size_t radius) {
    return neighborhood(g, Incidence(g), v, radius);
}

Neighborhood neighborhood(const Hypergraph& g, const Incidence& inc, Vertex v, std::size_t radius) {
    check_vertex(g, v);
    Neighborhood nb;
    nb.root = v;
    nb.radius = radius;
    BallExplorer explorer(g, inc);
    nb.is_tree = explorer.explore(v, radius, &nb, false);
    return nb;
}

bool is_treelike_at(const Hypergraph& g, const Incidence& inc, Vertex v, std::size_t radius) {
    check_vertex(g, v);
    BallExplorer explorer(g, inc);
    return explorer.explore(v, radius, nullptr, true);
}

double treelike_fraction(const Hypergraph& g, std::size_t radius) {
    const Incidence inc(g);
    BallExplorer explorer(g, inc);
    std::size_t trees = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        trees += explorer.explore(v, radius, nullptr, true) ? 1 : 0;
    }
    return static_cast<double>(trees) / static_cast<double>(g.n());
}

std::optional<std::size_t> girth(const Hypergraph& g) {
    // BFS from every vertex node of the bipartite incidence graph. Nodes [0, n) are
    // vertices, [n, n+m) are hyperedges. A non-tree arc closes a cycle of length
    // dist[u] + dist[w] + 1; the minimum over all roots is the exact shortest cycle.
    const std::size_t n = g.n();
    const std::size_t m = g.num_edges();
    const Incidence inc(g);
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n + m, kInf);
    std::vector<std::size_t> parent(n + m, kInf);
    std::vector<std::size_t> touched;
    std::vector<std::size_t> queue;
    std::size_t best = kInf;

    for (std::size_t root = 0; root < n; ++root) {
        for (const std::size_t t : touched) {
            dist[t] = kInf;
            parent[t] = kInf;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push_back(root);
        queue.push_back(root);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t u = queue[head];
            if (best != kInf && 2 * dist[u] + 1 >= best) {
                break;
            }
            auto relax = [&](std::size_t w) {
                if (w == parent[u]) {
                    return;
                }
                if (dist[w] == kInf) {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push_back(w);
                    queue.push_back(w);
                } else {
                    best = std::min(best, dist[u] + dist[w] + 1);
                }
            };
            if (u < n) {
                for (const std::uint32_t e : inc.edges_of(static_cast<Vertex>(u))) {
                    relax(n + e);
                }
            } else {
                for (const Vertex w : g.edge(u - n)) {
                    relax(w);
                }
            }
        }
    }
    if (best == kInf) {
        return std::nullopt;
    }
    return best / 2;
}

double girth_upper_bound(std::size_t n, std::size_t d, std::size_t q) {
    const double denom = std::log(static_cast<double>(q) - 1.0) + std::log(static_cast<double>(d) - 1.0);
    if (!(denom > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * std::log(static_cast<double>(n)) / denom + 2.0;
}

double regular_treelike_probability(std::size_t n, double lambda, std::size_t q, std::size_t p) {
    const double branch = (static_cast<double>(q) - 1.0) * lambda;
    double prob = 1.0;
    double used = 0.0;
    double level = 1.0;
    for (std::size_t k = 1; k <= p; ++k) {
        level *= branch;
        const double available = static_cast<double>(n) - 1.0 - used;
        if (available <= 0.0) {
            return 0.0;
        }
        prob -= level / available;
        used += level;
    }
    return std::max(0.0, prob);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    __extension__ using u128 = unsigned __int128;
    u128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

/// q distinct vertices from [0, n), by Floyd's algorithm.
detail::EdgeKey random_subset(std::size_t n, std::size_t q, Rng& rng) {
    detail::EdgeKey chosen;
    chosen.reserve(q);
    for (std::size_t j = n - q; j < n; ++j) {
        const auto t = static_cast<Vertex>(uniform_below(rng, j + 1));
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
            chosen.push_back(t);
        } else {
            chosen.push_back(static_cast<Vertex>(j));
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace

Hypergraph gen_er_nm(std::size_t n, std::size_t m, std::size_t q, Seed seed) {
    check_shape(n, q);
    if (q > n) {
        throw ParameterError(fmt::format("uniformity q={} exceeds n={}", q, n));
    }
    const std::uint64_t total = binomial(n, q);
    if (m > total) {
        throw ParameterError(fmt::format("m={} exceeds C({}, {})={}", m, n, q, total));
    }
    Rng rng = make_rng(seed);
    std::vector<detail::EdgeKey> edges;
    edges.reserve(m);

    constexpr std::uint64_t kEnumerateLimit = std::uint64_t{1} << 20;
    if (total <= kEnumerateLimit && 4 * static_cast<std::uint64_t>(m) >= total) {
        // Dense regime: partial Fisher-Yates over all q-subsets.
        std::vector<detail::EdgeKey> all;
        all.reserve(total);
        detail::for_each_combination(n, q, [&](std::span<const Vertex> c) { all.emplace_back(c.begin(), c.end()); });
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + uniform_below(rng, all.size() - i);
            std::swap(all[i], all[j]);
            edges.push_back(std::move(all[i]));
        }
    } else {
        detail::EdgeSet seen;
        seen.reserve(m);
        while (edges.size() < m) {
            auto e = random_subset(n, q, rng);
            if (seen.insert(e).second) {
                edges.push_back(std::move(e));
            }
        }
    }
    return Hypergraph(n, q, detail::flatten_sorted(std::move(edges)));
}

Hypergraph gen_er_np(std::size_t n, double edge_prob, std::size_t q, Seed seed) {
    check_shape(n, q);
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
        throw ParameterError(fmt::format("edge probability {} outside [0, 1]", edge_prob));
    }
    if (q > n) {
        throw ParameterError(fmt::format("uniformity q={} exceeds n={}", q, n));
    }
    const std::uint64_t total = binomial(n, q);
    if (total == std::numeric_limits<std::uint64_t>::max()) {
        throw ParameterError("C(n, q) overflows 64 bits");
    }
    // Independent inclusion of every q-subset is equivalent to drawing the edge
    // count from Binomial(C(n,q), p) and then a uniform subset of that size.
    Rng rng = make_rng(derive_seed(seed, "edge-count"));
    const auto m = std::binomial_distribution<std::uint64_t>{total, edge_prob}(rng);
    return gen_er_nm(n, static_cast<std::size_t>(m), q, derive_seed(seed, "edges"));
}

namespace {

/// Configuration-model edge list with incremental defect accounting.
/// Defect potential = repeated vertices inside edges + surplus copies of edges.
class StubMatching {
public:
    explicit StubMatching(std::vector<detail::EdgeKey> edges) : edges_(std::move(edges)) {
        for (const auto& e : edges_) {
            potential_ += add(e);
        }
    }

    std::size_t potential() const noexcept { return potential_; }
    std::size_t size() const noexcept { return edges_.size(); }

    bool defective(std::size_t i) const {
        const auto k = detail::sorted_key(edges_[i]);
        if (detail::repeats(k) > 0) {
            return true;
        }
        return counts_.at(k) > 1;
    }

    /// Swaps edges_[e][a] and edges_[f][b] if that does not raise the potential.
    bool try_swap(std::size_t e, std::size_t a, std::size_t f, std::size_t b) {
        const std::size_t before = potential_;
        std::ptrdiff_t delta = 0;
        delta -= static_cast<std::ptrdiff_t>(remove(edges_[e]));
        delta -= static_cast<std::ptrdiff_t>(remove(edges_[f]));
        std::swap(edges_[e][a], edges_[f][b]);
        delta += static_cast<std::ptrdiff_t>(add(edges_[e]));
        delta += static_cast<std::ptrdiff_t>(add(edges_[f]));
        const auto after = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(before) + delta);
        if (after <= before) {
            potential_ = after;
            return true;
        }
        remove(edges_[e]);
        remove(edges_[f]);
        std::swap(edges_[e][a], edges_[f][b]);
        add(edges_[e]);
        add(edges_[f]);
        return false;
    }

    std::vector<detail::EdgeKey> sorted_edges() const {
        std::vector<detail::EdgeKey> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_) {
            out.push_back(detail::sorted_key(e));
        }
        return out;
    }

private:
    // Each returns that edge's contribution to the potential.
    std::size_t add(const detail::EdgeKey& e) {
        auto k = detail::sorted_key(e);
        const std::size_t r = detail::repeats(k);
        if (r > 0) {
            return r;
        }
        return counts_[k]++ > 0 ? 1 : 0;
    }

    std::size_t remove(const detail::EdgeKey& e) {
        auto k = detail::sorted_key(e);
        const std::size_t r = detail::repeats(k);
        if (r > 0) {
            return r;
        }
        auto it = counts_.find(k);
        const bool surplus = it->second > 1;
        if (--it->second == 0) {
            counts_.erase(it);
        }
        return surplus ? 1 : 0;
    }

    std::vector<detail::EdgeKey> edges_;
    detail::EdgeCount counts_;
    std::size_t potential_ = 0;
};

} // namespace

Hypergraph gen_regular(std::size_t n, std::size_t d, std::size_t q, Seed seed) {
    check_shape(n, q);
    if (q > n) {
        throw ParameterError(fmt::format("uniformity q={} exceeds n={}", q, n));
    }
    if ((n * d) % q != 0) {
        throw ParameterError(fmt::format("n*d = {} is not divisible by q = {}", n * d, q));
    }
    if (d > binomial(n - 1, q - 1)) {
        throw ParameterError(fmt::format("degree {} exceeds C({}, {})", d, n - 1, q - 1));
    }
    const std::size_t m = n * d / q;
    if (m == 0) {
        return Hypergraph(n, q);
    }
    Rng rng = make_rng(seed);
    std::vector<Vertex> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v) {
        stubs.insert(stubs.end(), d, static_cast<Vertex>(v));
    }
    auto group = [&] {
        std::vector<detail::EdgeKey> edges(m);
        for (std::size_t e = 0; e < m; ++e) {
            edges[e].assign(stubs.begin() + static_cast<std::ptrdiff_t>(e * q),
                            stubs.begin() + static_cast<std::ptrdiff_t>((e + 1) * q));
        }
        return edges;
    };

    constexpr int kMatchingAttempts = 100;
    for (int attempt = 0; attempt < kMatchingAttempts; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        StubMatching matching(group());
        if (matching.potential() == 0) {
            return Hypergraph(n, q, detail::flatten_sorted(matching.sorted_edges()));
        }
    }

    StubMatching matching(group());
    const std::uint64_t swap_cap = 200 * static_cast<std::uint64_t>(m) * q + 10000;
    std::uint64_t swaps = 0;
    std::vector<std::size_t> bad;
    while (matching.potential() > 0) {
        bad.clear();
        for (std::size_t e = 0; e < m; ++e) {
            if (matching.defective(e)) {
                bad.push_back(e);
            }
        }
        for (std::size_t tries = 0; tries < 4 * bad.size() + 4 && matching.potential() > 0; ++tries) {
            if (++swaps > swap_cap) {
                throw GenerationError(
                    fmt::format("configuration model could not repair a {}-regular {}-uniform matching on {} vertices",
                                d, q, n),
                    kMatchingAttempts + swaps);
            }
            const std::size_t e = bad[uniform_below(rng, bad.size())];
            const std::size_t f = uniform_below(rng, m);
            if (f == e) {
                continue;
            }
            matching.try_swap(e, uniform_below(rng, q), f, uniform_below(rng, q));
        }
    }
    return Hypergraph(n, q, detail::flatten_sorted(matching.sorted_edges()));
}

void write_hypergraph(std::ostream& os, const Hypergraph& g) {
    os << g.q() << ' ' << g.n() << ' ' << g.num_edges() << '\n';
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto edge = g.edge(e);
        for (std::size_t k = 0; k < edge.size(); ++k) {
            os << (k == 0 ? "" : " ") << edge[k];
        }
        os << '\n';
    }
}

Hypergraph read_hypergraph(std::istream& is) {
    std::size_t q = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    if (!(is >> q >> n >> m)) {
        throw FormatError("hypergraph header must be 'q n m'");
    }
    std::vector<Vertex> flat(m * q);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        long long v = 0;
        if (!(is >> v) || v < 0) {
            throw FormatError(fmt::format("hypergraph body: expected vertex index #{} of {}", i, flat.size()));
        }
        flat[i] = static_cast<Vertex>(v);
    }
    try {
        return Hypergraph(n, q, std::move(flat));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("invalid hypergraph: ") + e.what());
    }
}

} // namespace ogplab
