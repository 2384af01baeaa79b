#include "ogplab/solve.hpp"

#include "ogplab/error.hpp"
#include "ogplab/gray_scan.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

namespace ogplab {

void ThresholdSpec::validate() const {
    if (!std::isfinite(value)) {
        throw ParameterError("threshold value must be finite");
    }
    if (mode == ThresholdMode::Ratio && (value <= 0.0 || value > 1.0)) {
        throw ParameterError(fmt::format("ratio threshold must lie in (0, 1], got {}", value));
    }
    if (mode == ThresholdMode::AdditivePerSite && value < 0.0) {
        throw ParameterError(fmt::format("additive threshold must be >= 0, got {}", value));
    }
}

double resolve_threshold(const ThresholdSpec& thr, double optimum, std::size_t n, bool integral) {
    thr.validate();
    double cut = thr.mode == ThresholdMode::Ratio
                     ? optimum - (1.0 - thr.value) * std::abs(optimum)
                     : optimum - thr.value * static_cast<double>(n);
    if (integral) {
        cut = std::ceil(cut - 1e-9);
    }
    return std::min(cut, optimum);
}

namespace {

using Candidate = std::pair<std::uint64_t, double>;

/// Absolute slack for comparisons on floating-point energies.
double energy_tolerance(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

void check_exhaustive_cap(std::size_t n, const SolveOptions& opts) {
    const std::size_t cap = std::min(opts.exhaustive_cap, kGrayScanLimit);
    if (n > cap) {
        throw CapacityError(fmt::format(
            "exhaustive scan refused for n = {} (cap {}); use branch_and_bound for larger instances", n, cap));
    }
}

std::vector<Member> to_members(std::size_t n, std::vector<Candidate> c) {
    std::sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.first < b.first; });
    std::vector<Member> out;
    out.reserve(c.size());
    for (const auto& [bits, cost] : c) {
        out.push_back({SpinConfig::from_bits(n, bits), cost});
    }
    return out;
}

struct ScanOutcome {
    std::uint64_t best_bits = 0;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<Candidate> candidates;
    bool overflowed = false;
};

/// One Gray-code pass. With `fixed_cutoff` unset the cutoff follows the best value seen
/// so far, which only grows, so every final member is collected; the set is filtered
/// lazily when it reaches the cap.
template <typename Scan>
ScanOutcome collect_scan(Scan&& scan, const ThresholdSpec& thr, std::size_t n, bool integral,
                         bool collect, std::optional<double> fixed_cutoff, std::size_t cap) {
    ScanOutcome out;
    double tol = integral ? 0.0 : energy_tolerance(0.0);
    double cutoff = fixed_cutoff.value_or(std::numeric_limits<double>::infinity());
    scan([&](std::uint64_t bits, double cost) {
        if (cost > out.best) {
            out.best = cost;
            out.best_bits = bits;
            if (!fixed_cutoff) {
                cutoff = resolve_threshold(thr, cost, n, integral);
                if (!integral) {
                    tol = energy_tolerance(cost);
                }
            }
        }
        if (!collect || out.overflowed || cost < cutoff - tol) {
            return;
        }
        if (out.candidates.size() >= cap) {
            std::erase_if(out.candidates, [&](const Candidate& c) { return c.second < cutoff - tol; });
            if (out.candidates.size() >= cap) {
                out.overflowed = true;
                out.candidates.clear();
                out.candidates.shrink_to_fit();
                return;
            }
        }
        out.candidates.emplace_back(bits, cost);
    });
    return out;
}

} // namespace

Optimum exhaustive_max(const XorsatInstance& inst, const SolveOptions& opts) {
    check_exhaustive_cap(inst.n(), opts);
    std::size_t best = 0;
    std::uint64_t best_bits = 0;
    bool first = true;
    for_each_xorsat_cost(inst, [&](std::uint64_t bits, std::size_t cost) {
        if (first || cost > best) {
            best = cost;
            best_bits = bits;
            first = false;
        }
    });
    return {static_cast<double>(best), SpinConfig::from_bits(inst.n(), best_bits)};
}

Optimum exhaustive_max(const DenseSpinInstance& inst, const SolveOptions& opts) {
    check_exhaustive_cap(inst.n(), opts);
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_bits = 0;
    for_each_dense_cost(inst, [&](std::uint64_t bits, double e) {
        if (e > best) {
            best = e;
            best_bits = bits;
        }
    });
    auto z = SpinConfig::from_bits(inst.n(), best_bits);
    return {dense_cost(inst, z), z};
}

Optimum exhaustive_max(const Instance& inst, const SolveOptions& opts) {
    return std::visit([&](const auto& i) { return exhaustive_max(i, opts); }, inst);
}

SolutionSet enumerate_near_optimal(const XorsatInstance& inst, const ThresholdSpec& thr,
                                   const SolveOptions& opts) {
    thr.validate();
    check_exhaustive_cap(inst.n(), opts);
    const std::size_t n = inst.n();
    auto scan = [&](auto&& visit) {
        for_each_xorsat_cost(inst, [&](std::uint64_t bits, std::size_t c) { visit(bits, static_cast<double>(c)); });
    };
    ScanOutcome pass = collect_scan(scan, thr, n, true, true, std::nullopt, opts.member_cap);
    const double cutoff = resolve_threshold(thr, pass.best, n, true);
    std::uint64_t visited = std::uint64_t{1} << n;
    if (pass.overflowed) {
        pass = collect_scan(scan, thr, n, true, true, cutoff, opts.member_cap);
        visited *= 2;
        if (pass.overflowed) {
            throw CapacityError(fmt::format("more than {} configurations above threshold", opts.member_cap));
        }
    }
    std::erase_if(pass.candidates, [&](const Candidate& c) { return c.second < cutoff; });

    SolutionSet s;
    s.n = n;
    s.optimum = pass.best;
    s.threshold = cutoff;
    s.members = to_members(n, std::move(pass.candidates));
    s.exhaustive = true;
    s.integral = true;
    s.z2_symmetric = inst.z2_symmetric();
    s.nodes = visited;
    return s;
}

SolutionSet enumerate_near_optimal(const DenseSpinInstance& inst, const ThresholdSpec& thr,
                                   const SolveOptions& opts) {
    thr.validate();
    check_exhaustive_cap(inst.n(), opts);
    const std::size_t n = inst.n();
    auto scan = [&](auto&& visit) { for_each_dense_cost(inst, visit); };
    ScanOutcome pass = collect_scan(scan, thr, n, false, true, std::nullopt, opts.member_cap);

    // Incremental energies carry rounding; settle optimum and membership exactly.
    double optimum = dense_cost(inst, SpinConfig::from_bits(n, pass.best_bits));
    std::uint64_t visited = std::uint64_t{1} << n;
    if (pass.overflowed) {
        const double cut = resolve_threshold(thr, optimum, n, false);
        pass.candidates = collect_scan(scan, thr, n, false, true, cut, opts.member_cap).candidates;
        visited *= 2;
        if (pass.candidates.size() >= opts.member_cap) {
            throw CapacityError(fmt::format("more than {} configurations above threshold", opts.member_cap));
        }
    }
    for (auto& c : pass.candidates) {
        c.second = dense_cost(inst, SpinConfig::from_bits(n, c.first));
        optimum = std::max(optimum, c.second);
    }
    const double cutoff = resolve_threshold(thr, optimum, n, false);
    std::erase_if(pass.candidates, [&](const Candidate& c) { return c.second < cutoff; });

    SolutionSet s;
    s.n = n;
    s.optimum = optimum;
    s.threshold = cutoff;
    s.members = to_members(n, std::move(pass.candidates));
    s.exhaustive = true;
    s.integral = false;
    s.z2_symmetric = inst.z2_symmetric();
    s.nodes = visited;
    return s;
}

SolutionSet enumerate_near_optimal(const Instance& inst, const ThresholdSpec& thr, const SolveOptions& opts) {
    return std::visit([&](const auto& i) { return enumerate_near_optimal(i, thr, opts); }, inst);
}

namespace {

/// Shared node budget. Workers count locally and publish in batches.
class NodeCounter {
public:
    explicit NodeCounter(std::uint64_t budget) : budget_(budget) {}

    class Local {
    public:
        explicit Local(NodeCounter& c) : c_(c) {}
        Local(const Local&) = delete;
        ~Local() { flush(); }

        /// Counts one node; false once the budget is spent.
        bool tick() {
            if (++pending_ >= kBatch) {
                flush();
            }
            return !c_.stop_.load(std::memory_order_relaxed);
        }
        void flush() {
            const auto total = c_.used_.fetch_add(pending_, std::memory_order_relaxed) + pending_;
            pending_ = 0;
            if (c_.budget_ != 0 && total >= c_.budget_) {
                c_.stop_.store(true, std::memory_order_relaxed);
            }
        }

    private:
        static constexpr std::uint64_t kBatch = 1024;
        NodeCounter& c_;
        std::uint64_t pending_ = 0;
    };

    bool exhausted() const noexcept { return stop_.load(); }
    std::uint64_t used() const noexcept { return used_.load(); }

private:
    std::uint64_t budget_;
    std::atomic<std::uint64_t> used_{0};
    std::atomic<bool> stop_{false};
};

/// Runs `expand(root, depth_limit, frontier, out, local)` from the root; with several
/// workers the tree is first cut at a shallow depth and the subtrees are shared out.
/// Members are merged and sorted, so the result does not depend on scheduling.
template <typename State, typename Expand>
std::vector<Candidate> parallel_enumerate(const State& root, std::size_t n, unsigned workers,
                                          NodeCounter& counter, Expand&& expand) {
    std::vector<Candidate> out;
    if (workers <= 1 || n < 8) {
        NodeCounter::Local local(counter);
        std::vector<State> unused;
        expand(root, n, unused, out, local);
        return out;
    }
    const std::size_t split = std::min<std::size_t>(n - 1, std::bit_width(std::size_t{workers} * 16 - 1));
    std::vector<State> frontier;
    {
        NodeCounter::Local local(counter);
        expand(root, split, frontier, out, local);
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::vector<Candidate>> buffers(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            NodeCounter::Local local(counter);
            std::vector<State> unused;
            for (std::size_t i = next++; i < frontier.size(); i = next++) {
                expand(frontier[i], n, unused, buffers[w], local);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& b : buffers) {
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

void check_bnb_size(std::size_t n) {
    if (n > 64) {
        throw CapacityError(fmt::format("branch and bound packs configurations in 64 bits; n = {}", n));
    }
}

// ---------------------------------------------------------------------------------
// XORSAT

struct XorClause {
    std::uint64_t vars;
    bool odd;
};

class XorSearch {
public:
    explicit XorSearch(const XorsatInstance& inst) : inst_(inst), n_(inst.n()), m_(inst.num_edges()) {
        build_order();
    }

    struct State {
        std::size_t depth;
        std::uint64_t bits;
        std::size_t unsat;
    };

    std::size_t m() const noexcept { return m_; }
    const std::vector<Vertex>& order() const noexcept { return order_; }

    /// Steepest-ascent single flips from random starts.
    std::pair<std::uint64_t, std::size_t> local_search(Seed seed, int restarts) const {
        const auto& g = inst_.graph();
        std::vector<std::vector<std::uint32_t>> inc(n_);
        for (std::size_t e = 0; e < m_; ++e) {
            for (const Vertex v : g.edge(e)) {
                inc[v].push_back(static_cast<std::uint32_t>(e));
            }
        }
        Rng rng = make_rng(seed);
        std::uint64_t best_bits = 0;
        std::size_t best = 0;
        bool have = false;
        std::vector<char> sat(m_);
        for (int r = 0; r < restarts; ++r) {
            std::uint64_t bits = rng() & low_mask(n_);
            std::size_t cost = 0;
            for (std::size_t e = 0; e < m_; ++e) {
                sat[e] = is_sat(e, bits);
                cost += static_cast<std::size_t>(sat[e]);
            }
            while (true) {
                int best_gain = 0;
                std::size_t best_v = n_;
                for (std::size_t v = 0; v < n_; ++v) {
                    int gain = 0;
                    for (const auto e : inc[v]) {
                        gain += sat[e] ? -1 : 1;
                    }
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_v = v;
                    }
                }
                if (best_v == n_) {
                    break;
                }
                bits ^= std::uint64_t{1} << best_v;
                for (const auto e : inc[best_v]) {
                    sat[e] = static_cast<char>(!sat[e]);
                }
                cost += static_cast<std::size_t>(best_gain);
            }
            if (!have || cost > best) {
                best = cost;
                best_bits = bits;
                have = true;
            }
        }
        return {best_bits, best};
    }

    /// Phase 1: maximize, pruning subtrees whose bound cannot beat `best`.
    void maximize(const State& s, std::size_t& best, std::uint64_t& best_bits, NodeCounter::Local& local) const {
        if (s.depth == n_) {
            if (m_ - s.unsat > best) {
                best = m_ - s.unsat;
                best_bits = s.bits;
            }
            return;
        }
        const Vertex v = order_[s.depth];
        const std::uint64_t one = std::uint64_t{1} << v;
        const auto [u0, u1] = closing_unsat(s.depth, s.bits);
        State c0{s.depth + 1, s.bits, s.unsat + u0};
        State c1{s.depth + 1, s.bits | one, s.unsat + u1};
        if (c1.unsat < c0.unsat) {
            std::swap(c0, c1);
        }
        for (const State& c : {c0, c1}) {
            if (!local.tick()) {
                return;
            }
            if (m_ - c.unsat > best) {
                maximize(c, best, best_bits, local);
            }
        }
    }

    /// Phase 2: every completion with at most `slack` unsatisfied clauses. Stops at
    /// `limit` and records those states in `frontier` instead.
    void enumerate(const State& s, std::size_t slack, std::size_t limit, std::vector<State>& frontier,
                   std::vector<Candidate>& out, NodeCounter::Local& local) const {
        if (s.depth == n_) {
            out.emplace_back(s.bits, static_cast<double>(m_ - s.unsat));
            return;
        }
        if (s.depth == limit) {
            frontier.push_back(s);
            return;
        }
        const std::uint64_t one = std::uint64_t{1} << order_[s.depth];
        const auto [u0, u1] = closing_unsat(s.depth, s.bits);
        if (!local.tick()) {
            return;
        }
        if (s.unsat + u0 <= slack) {
            enumerate({s.depth + 1, s.bits, s.unsat + u0}, slack, limit, frontier, out, local);
        }
        if (!local.tick()) {
            return;
        }
        if (s.unsat + u1 <= slack) {
            enumerate({s.depth + 1, s.bits | one, s.unsat + u1}, slack, limit, frontier, out, local);
        }
    }

private:
    bool is_sat(std::size_t e, std::uint64_t bits) const {
        bool parity = false;
        for (const Vertex v : inst_.graph().edge(e)) {
            parity ^= ((bits >> v) & 1U) != 0;
        }
        return parity == (inst_.couplings()[e] < 0);
    }

    /// Unsatisfied counts among the clauses closed at `depth`, for both values of the
    /// branching variable (its bit is clear in `bits`).
    std::pair<std::size_t, std::size_t> closing_unsat(std::size_t depth, std::uint64_t bits) const {
        std::size_t u0 = 0;
        const auto& cl = closes_[depth];
        for (const auto& c : cl) {
            const bool odd = (std::popcount(bits & c.vars) & 1) != 0;
            u0 += odd != c.odd ? 1 : 0;
        }
        return {u0, cl.size() - u0};
    }

    // Static order: repeatedly take the variable that closes the most clauses, then
    // touches the most partially assigned clauses, then has the highest degree, then
    // the lowest index.
    void build_order() {
        const auto& g = inst_.graph();
        const std::size_t q = inst_.q();
        std::vector<std::vector<std::uint32_t>> inc(n_);
        for (std::size_t e = 0; e < m_; ++e) {
            for (const Vertex v : g.edge(e)) {
                inc[v].push_back(static_cast<std::uint32_t>(e));
            }
        }
        std::vector<std::size_t> assigned_in(m_, 0);
        std::vector<char> used(n_, 0);
        order_.reserve(n_);
        for (std::size_t step = 0; step < n_; ++step) {
            std::size_t pick = n_;
            std::tuple<std::size_t, std::size_t, std::size_t> best_key{0, 0, 0};
            for (std::size_t v = 0; v < n_; ++v) {
                if (used[v] != 0) {
                    continue;
                }
                std::size_t closes = 0;
                std::size_t partial = 0;
                for (const auto e : inc[v]) {
                    closes += assigned_in[e] + 1 == q ? 1 : 0;
                    partial += assigned_in[e] > 0 ? 1 : 0;
                }
                const std::tuple key{closes, partial, inc[v].size()};
                if (pick == n_ || key > best_key) {
                    pick = v;
                    best_key = key;
                }
            }
            used[pick] = 1;
            order_.push_back(static_cast<Vertex>(pick));
            for (const auto e : inc[pick]) {
                ++assigned_in[e];
            }
        }

        std::vector<std::size_t> pos(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            pos[order_[i]] = i;
        }
        closes_.assign(n_, {});
        for (std::size_t e = 0; e < m_; ++e) {
            std::size_t last = 0;
            std::uint64_t vars = 0;
            for (const Vertex v : g.edge(e)) {
                last = std::max(last, pos[v]);
                vars |= std::uint64_t{1} << v;
            }
            closes_[last].push_back({vars, inst_.couplings()[e] < 0});
        }
    }

    const XorsatInstance& inst_;
    std::size_t n_;
    std::size_t m_;
    std::vector<Vertex> order_;
    std::vector<std::vector<XorClause>> closes_;
};

// ---------------------------------------------------------------------------------
// SK

class SkSearch {
public:
    explicit SkSearch(const DenseSpinInstance& inst)
        : inst_(inst), n_(inst.n()), scale_(inst.scaling()), j_(n_ * n_, 0.0) {
        for (std::size_t k = 0; k < inst.num_tuples(); ++k) {
            const auto t = inst.tuple(k);
            j_[t[0] * n_ + t[1]] = inst.couplings()[k];
            j_[t[1] * n_ + t[0]] = inst.couplings()[k];
        }
        build_order();
        build_free_bounds();
    }

    struct State {
        std::size_t depth;
        std::uint64_t bits;
        double energy;
        std::vector<double> field;
    };

    std::size_t n() const noexcept { return n_; }
    double scale() const noexcept { return scale_; }

    State root() const { return {0, 0, 0.0, std::vector<double>(n_, 0.0)}; }

    /// Raw (unscaled) energy of a packed configuration.
    double raw_energy(std::uint64_t bits) const {
        double e = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double zi = ((bits >> i) & 1U) != 0 ? -1.0 : 1.0;
            for (std::size_t k = i + 1; k < n_; ++k) {
                const double zk = ((bits >> k) & 1U) != 0 ? -1.0 : 1.0;
                e += j_[i * n_ + k] * zi * zk;
            }
        }
        return e;
    }

    /// Single-flip steepest ascent from random starts; returns a canonical configuration.
    std::pair<std::uint64_t, double> local_search(Seed seed, int restarts) const {
        Rng rng = make_rng(seed);
        std::uint64_t best_bits = 0;
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> h(n_);
        for (int r = 0; r < restarts; ++r) {
            std::uint64_t bits = rng() & low_mask(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                h[i] = 0.0;
                for (std::size_t k = 0; k < n_; ++k) {
                    h[i] += j_[i * n_ + k] * (((bits >> k) & 1U) != 0 ? -1.0 : 1.0);
                }
            }
            while (true) {
                double best_gain = 1e-12;
                std::size_t pick = n_;
                for (std::size_t i = 0; i < n_; ++i) {
                    const double zi = ((bits >> i) & 1U) != 0 ? -1.0 : 1.0;
                    const double gain = -2.0 * zi * h[i];
                    if (gain > best_gain) {
                        best_gain = gain;
                        pick = i;
                    }
                }
                if (pick == n_) {
                    break;
                }
                const double zold = ((bits >> pick) & 1U) != 0 ? -1.0 : 1.0;
                bits ^= std::uint64_t{1} << pick;
                for (std::size_t k = 0; k < n_; ++k) {
                    h[k] -= 2.0 * zold * j_[pick * n_ + k];
                }
            }
            if ((bits & 1U) != 0) {
                bits = ~bits & low_mask(n_);
            }
            const double e = raw_energy(bits);
            if (e > best) {
                best = e;
                best_bits = bits;
            }
        }
        return {best_bits, best};
    }

    /// Phase 1 on raw energies.
    void maximize(State& s, double& best, std::uint64_t& best_bits, NodeCounter::Local& local) const {
        if (s.depth == n_) {
            if (s.energy > best) {
                best = s.energy;
                best_bits = s.bits;
            }
            return;
        }
        const double tol = energy_tolerance(best);
        for (const double z : value_order(s)) {
            if (!local.tick()) {
                return;
            }
            State c = child(s, z);
            if (bound(c) > best + tol) {
                maximize(c, best, best_bits, local);
            }
        }
    }

    void enumerate(const State& s, double raw_cutoff, std::size_t limit, std::vector<State>& frontier,
                   std::vector<Candidate>& out, NodeCounter::Local& local) const {
        const double tol = energy_tolerance(raw_cutoff);
        if (s.depth == n_) {
            if (s.energy >= raw_cutoff - tol) {
                out.emplace_back(s.bits, s.energy);
            }
            return;
        }
        if (s.depth == limit) {
            frontier.push_back(s);
            return;
        }
        for (const double z : value_order(s)) {
            if (!local.tick()) {
                return;
            }
            State c = child(s, z);
            if (bound(c) >= raw_cutoff - tol) {
                enumerate(c, raw_cutoff, limit, frontier, out, local);
            }
        }
    }

private:
    std::vector<double> value_order(const State& s) const {
        if (s.depth == 0) {
            return {1.0}; // Z2: spin 0 fixed to +1
        }
        const double h = s.field[order_[s.depth]];
        return h >= 0.0 ? std::vector<double>{1.0, -1.0} : std::vector<double>{-1.0, 1.0};
    }

    State child(const State& s, double z) const {
        const Vertex v = order_[s.depth];
        State c{s.depth + 1, z < 0 ? s.bits | (std::uint64_t{1} << v) : s.bits, s.energy + z * s.field[v], s.field};
        const double* row = &j_[v * n_];
        for (std::size_t i = s.depth + 1; i < n_; ++i) {
            const Vertex f = order_[i];
            c.field[f] += z * row[f];
        }
        return c;
    }

    double bound(const State& s) const {
        double b = s.energy + free_bound_[s.depth];
        for (std::size_t i = s.depth; i < n_; ++i) {
            b += std::abs(s.field[order_[i]]);
        }
        return b;
    }

    // Spin 0 first, then by decreasing total coupling magnitude.
    void build_order() {
        std::vector<double> weight(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                weight[i] += std::abs(j_[i * n_ + k]);
            }
        }
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), Vertex{0});
        std::stable_sort(order_.begin() + 1, order_.end(),
                         [&](Vertex a, Vertex b) { return weight[a] > weight[b]; });
    }

    void build_free_bounds() {
        free_bound_.assign(n_ + 1, 0.0);
        for (std::size_t d = 0; d + 1 < n_; ++d) {
            const std::size_t f = n_ - d;
            Eigen::MatrixXd block(f, f);
            double sum_abs = 0.0;
            for (std::size_t a = 0; a < f; ++a) {
                for (std::size_t b = 0; b < f; ++b) {
                    const double x = j_[order_[d + a] * n_ + order_[d + b]];
                    block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = x;
                    if (a < b) {
                        sum_abs += std::abs(x);
                    }
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
            const double spectral = 0.5 * eig.eigenvalues().maxCoeff() * static_cast<double>(f);
            free_bound_[d] = std::min(sum_abs, spectral) + 1e-9 * (1.0 + sum_abs);
        }
    }

    const DenseSpinInstance& inst_;
    std::size_t n_;
    double scale_;
    std::vector<double> j_;
    std::vector<Vertex> order_;
    std::vector<double> free_bound_;
};

} // namespace

SolutionSet branch_and_bound(const XorsatInstance& inst, const ThresholdSpec& thr, const SolveOptions& opts) {
    thr.validate();
    const std::size_t n = inst.n();
    check_bnb_size(n);
    XorSearch search(inst);
    const std::size_t m = search.m();

    auto [best_bits, best] = search.local_search(derive_seed(opts.seed, "incumbent"), 16);
    NodeCounter phase1(opts.node_budget);
    {
        NodeCounter::Local local(phase1);
        search.maximize({0, 0, 0}, best, best_bits, local);
    }
    const bool proven = !phase1.exhausted();

    const double cutoff = resolve_threshold(thr, static_cast<double>(best), n, true);
    const auto slack = static_cast<std::size_t>(static_cast<double>(m) - cutoff);
    NodeCounter phase2(opts.node_budget);
    auto candidates = parallel_enumerate(
        XorSearch::State{0, 0, 0}, n, opts.workers, phase2,
        [&](const XorSearch::State& s, std::size_t limit, std::vector<XorSearch::State>& frontier,
            std::vector<Candidate>& out, NodeCounter::Local& local) {
            search.enumerate(s, slack, limit, frontier, out, local);
        });

    SolutionSet s;
    s.n = n;
    s.optimum = static_cast<double>(best);
    s.threshold = cutoff;
    s.members = to_members(n, std::move(candidates));
    if (opts.member_cap != 0 && s.members.size() > opts.member_cap) {
        throw CapacityError(fmt::format("more than {} configurations above threshold", opts.member_cap));
    }
    s.exhaustive = proven && !phase2.exhausted();
    s.integral = true;
    s.z2_symmetric = inst.z2_symmetric();
    s.nodes = phase1.used() + phase2.used();
    return s;
}

SolutionSet branch_and_bound(const DenseSpinInstance& inst, const ThresholdSpec& thr, const SolveOptions& opts) {
    thr.validate();
    if (inst.q() != 2) {
        throw ParameterError(fmt::format("dense branch and bound supports q = 2 only, got q = {}", inst.q()));
    }
    const std::size_t n = inst.n();
    check_bnb_size(n);
    SkSearch search(inst);

    auto [best_bits, best] = search.local_search(derive_seed(opts.seed, "incumbent"), 32);
    NodeCounter phase1(opts.node_budget);
    {
        NodeCounter::Local local(phase1);
        auto root = search.root();
        search.maximize(root, best, best_bits, local);
    }
    const bool proven = !phase1.exhausted();

    double optimum = dense_cost(inst, SpinConfig::from_bits(n, best_bits));
    const double cut0 = resolve_threshold(thr, optimum, n, false);
    NodeCounter phase2(opts.node_budget);
    auto candidates = parallel_enumerate(
        search.root(), n, opts.workers, phase2,
        [&](const SkSearch::State& s, std::size_t limit, std::vector<SkSearch::State>& frontier,
            std::vector<Candidate>& out, NodeCounter::Local& local) {
            search.enumerate(s, cut0 / search.scale(), limit, frontier, out, local);
        });
    for (auto& c : candidates) {
        c.second = dense_cost(inst, SpinConfig::from_bits(n, c.first));
        optimum = std::max(optimum, c.second);
    }
    const double cutoff = resolve_threshold(thr, optimum, n, false);
    std::erase_if(candidates, [&](const Candidate& c) { return c.second < cutoff; });

    SolutionSet s;
    s.n = n;
    s.optimum = optimum;
    s.threshold = cutoff;
    s.members = to_members(n, std::move(candidates));
    if (opts.member_cap != 0 && s.members.size() > opts.member_cap) {
        throw CapacityError(fmt::format("more than {} configurations above threshold", opts.member_cap));
    }
    s.exhaustive = proven && !phase2.exhausted();
    s.integral = false;
    s.z2_symmetric = true;
    s.z2_canonical = true;
    s.nodes = phase1.used() + phase2.used();
    return s;
}

SolutionSet solve_near_optimal(const Instance& inst, const ThresholdSpec& thr, Backend backend,
                               const SolveOptions& opts) {
    if (backend == Backend::Auto) {
        const bool searchable = instance_size(inst) <= 64 &&
                                (std::holds_alternative<XorsatInstance>(inst) ||
                                 std::get<DenseSpinInstance>(inst).q() == 2);
        backend = searchable ? Backend::BranchAndBound : Backend::Exhaustive;
    }
    if (backend == Backend::Exhaustive) {
        return enumerate_near_optimal(inst, thr, opts);
    }
    return std::visit([&](const auto& i) { return branch_and_bound(i, thr, opts); }, inst);
}

SolutionSet canonicalize_z2(SolutionSet s) {
    if (!s.z2_symmetric) {
        throw ContractViolation("Z2 canonicalization needs a cost invariant under global spin flip");
    }
    if (s.n == 0) {
        s.z2_canonical = true;
        return s;
    }
    for (auto& m : s.members) {
        if (m.config.bit(0)) {
            m.config = m.config.negated();
        }
    }
    std::sort(s.members.begin(), s.members.end(), [](const Member& a, const Member& b) { return a.config < b.config; });
    s.members.erase(std::unique(s.members.begin(), s.members.end(),
                                [](const Member& a, const Member& b) { return a.config == b.config; }),
                    s.members.end());
    s.z2_canonical = true;
    return s;
}

std::size_t xorsat_partial_bound(const XorsatInstance& inst, const std::vector<bool>& assigned, const SpinConfig& z) {
    if (assigned.size() != inst.n() || z.size() != inst.n()) {
        throw ContractViolation("partial assignment length differs from instance size");
    }
    const auto& g = inst.graph();
    std::size_t bound = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        bool open = false;
        bool parity = false;
        for (const Vertex v : g.edge(e)) {
            open = open || !assigned[v];
            parity ^= z.bit(v);
        }
        bound += open || parity == (inst.couplings()[e] < 0) ? 1 : 0;
    }
    return bound;
}

namespace {

nlohmann::json cost_json(double c, bool integral) {
    if (integral) {
        return static_cast<long long>(std::llround(c));
    }
    return c;
}

} // namespace

void write_solution_set(std::ostream& os, const SolutionSet& s) {
    nlohmann::json head = {
        {"record", "solution_set"},
        {"instance", s.instance_id},
        {"n", s.n},
        {"optimum", cost_json(s.optimum, s.integral)},
        {"threshold", cost_json(s.threshold, s.integral)},
        {"exhaustive", s.exhaustive},
        {"integral", s.integral},
        {"z2_symmetric", s.z2_symmetric},
        {"z2_canonical", s.z2_canonical},
        {"nodes", s.nodes},
        {"members", s.members.size()},
    };
    os << head.dump() << '\n';
    for (const auto& m : s.members) {
        os << nlohmann::json{{"config", m.config.to_hex()}, {"cost", cost_json(m.cost, s.integral)}}.dump() << '\n';
    }
}

SolutionSet read_solution_set(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw FormatError("solution set: missing header record");
    }
    SolutionSet s;
    std::size_t count = 0;
    try {
        const auto head = nlohmann::json::parse(line);
        s.instance_id = head.value("instance", "");
        s.n = head.at("n").get<std::size_t>();
        s.optimum = head.at("optimum").get<double>();
        s.threshold = head.at("threshold").get<double>();
        s.exhaustive = head.at("exhaustive").get<bool>();
        s.integral = head.value("integral", false);
        s.z2_symmetric = head.value("z2_symmetric", false);
        s.z2_canonical = head.value("z2_canonical", false);
        s.nodes = head.value("nodes", std::uint64_t{0});
        count = head.at("members").get<std::size_t>();
        s.members.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!std::getline(is, line)) {
                throw FormatError(fmt::format("solution set: expected {} members, found {}", count, i));
            }
            const auto rec = nlohmann::json::parse(line);
            s.members.push_back({SpinConfig::from_hex(s.n, rec.at("config").get<std::string>()),
                                 rec.at("cost").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("solution set: ") + e.what());
    }
    return s;
}

} // namespace ogplab
