#pragma once

#include "ogplab/instance.hpp"
#include "ogplab/rng.hpp"
#include "ogplab/spin_config.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace ogplab {

enum class ThresholdMode {
    /// cost >= value * optimum (rounded up to an integer for XORSAT).
    Ratio,
    /// cost >= optimum - value * n.
    AdditivePerSite,
};

struct ThresholdSpec {
    ThresholdMode mode = ThresholdMode::Ratio;
    double value = 0.95;

    static ThresholdSpec ratio(double v) { return {ThresholdMode::Ratio, v}; }
    static ThresholdSpec additive(double v) { return {ThresholdMode::AdditivePerSite, v}; }

    /// Throws ParameterError unless ratio is in (0, 1] or additive is >= 0.
    void validate() const;
};

/// Admission cutoff for a known optimum. For a negative optimum the ratio is applied
/// to |optimum|, i.e. cutoff = optimum - (1 - value) |optimum|.
double resolve_threshold(const ThresholdSpec& thr, double optimum, std::size_t n, bool integral);

struct Member {
    SpinConfig config;
    double cost = 0.0;

    friend bool operator==(const Member&, const Member&) = default;
};

/// Near-optimal configurations of one instance, sorted by configuration.
struct SolutionSet {
    std::string instance_id;
    std::size_t n = 0;
    double optimum = 0.0;
    double threshold = 0.0;
    std::vector<Member> members;
    /// Members provably include every configuration at or above threshold, and
    /// optimum is the proven global maximum.
    bool exhaustive = false;
    /// Costs are integers (XORSAT).
    bool integral = false;
    /// The instance's cost is invariant under z -> -z.
    bool z2_symmetric = false;
    /// Members hold one representative per {z, -z} pair (spin 0 = +1).
    bool z2_canonical = false;
    /// Search nodes (branch and bound) or configurations (scan) visited.
    std::uint64_t nodes = 0;

    std::size_t size() const noexcept { return members.size(); }
};

struct Optimum {
    double value = 0.0;
    SpinConfig argmax;
};

struct SolveOptions {
    /// Largest n accepted by the exhaustive scan.
    std::size_t exhaustive_cap = 32;
    /// Largest member set collected before a CapacityError.
    std::size_t member_cap = std::size_t{1} << 22;
    /// Branch-and-bound node budget per search phase; 0 means unlimited.
    std::uint64_t node_budget = 0;
    /// Threads for the branch-and-bound enumeration phase.
    unsigned workers = 1;
    /// Seeds the local-search incumbent of branch and bound.
    Seed seed = 0;
};

Optimum exhaustive_max(const XorsatInstance& inst, const SolveOptions& opts = {});
Optimum exhaustive_max(const DenseSpinInstance& inst, const SolveOptions& opts = {});
Optimum exhaustive_max(const Instance& inst, const SolveOptions& opts = {});

/// Every configuration at or above the resolved threshold, by full Gray-code scan.
SolutionSet enumerate_near_optimal(const XorsatInstance& inst, const ThresholdSpec& thr,
                                   const SolveOptions& opts = {});
SolutionSet enumerate_near_optimal(const DenseSpinInstance& inst, const ThresholdSpec& thr,
                                   const SolveOptions& opts = {});
SolutionSet enumerate_near_optimal(const Instance& inst, const ThresholdSpec& thr,
                                   const SolveOptions& opts = {});

/// Two-phase depth-first search over a static variable order (n <= 64): find the
/// optimum, then collect every configuration at or above the fixed cutoff. A subtree
/// is pruned when satisfied-so-far plus the number of clauses not yet fully assigned
/// falls below the cutoff. Exceeding the node budget returns a partial set with
/// exhaustive = false.
SolutionSet branch_and_bound(const XorsatInstance& inst, const ThresholdSpec& thr,
                             const SolveOptions& opts = {});

/// Branch and bound for the SK model (q = 2, n <= 64). Spin 0 is fixed to +1, so
/// members come out Z2-canonical. The bound adds |local field| per free spin and
/// min(sum |J_ff|, lambda_max(J_ff) |F| / 2) for the free block F.
SolutionSet branch_and_bound(const DenseSpinInstance& inst, const ThresholdSpec& thr,
                             const SolveOptions& opts = {});

enum class Backend { Auto, Exhaustive, BranchAndBound };

/// Auto picks branch and bound where it applies (XORSAT or SK, n <= 64) and the
/// exhaustive scan otherwise; branch and bound is the faster of the two from n ~ 16 up.
SolutionSet solve_near_optimal(const Instance& inst, const ThresholdSpec& thr, Backend backend,
                               const SolveOptions& opts = {});

/// Keeps one representative of each {z, -z} pair, the one with spin 0 = +1.
SolutionSet canonicalize_z2(SolutionSet s);

/// Upper bound used by XORSAT branch and bound for a partial assignment: clauses
/// satisfied among those fully assigned, plus clauses with an unassigned variable.
std::size_t xorsat_partial_bound(const XorsatInstance& inst, const std::vector<bool>& assigned,
                                 const SpinConfig& z);

/// JSONL: a header record, then one {"config": hex, "cost": value} line per member.
void write_solution_set(std::ostream& os, const SolutionSet& s);
SolutionSet read_solution_set(std::istream& is);

} // namespace ogplab
