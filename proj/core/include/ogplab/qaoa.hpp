#pragma once

#include "ogplab/instance.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

/// Exact statevector QAOA for small instances.
///
///   |gamma, beta> = e^{-i beta_p B} e^{-i gamma_p C} ... e^{-i beta_1 B} e^{-i gamma_1 C} |+>^n
///
/// with B = sum_j X_j and C the instance cost, diagonal in the computational basis.
/// Basis index b encodes spins z_i = (-1)^{b_i}.
namespace ogplab::qaoa {

inline constexpr std::size_t kMaxQubits = 24;

struct Params {
    std::vector<double> gammas;
    std::vector<double> betas;

    std::size_t depth() const noexcept { return gammas.size(); }
    /// Throws ParameterError when the two sequences differ in length.
    void validate() const;

    friend bool operator==(const Params&, const Params&) = default;
};

using Amplitude = std::complex<double>;
using Statevector = std::vector<Amplitude>;
using CostDiagonal = std::vector<double>;

/// Entry b is the cost of configuration b. Throws CapacityError above kMaxQubits.
CostDiagonal build_cost_diagonal(const XorsatInstance& inst);
CostDiagonal build_cost_diagonal(const DenseSpinInstance& inst);
CostDiagonal build_cost_diagonal(const Instance& inst);

/// Called after each completed layer with the 1-based layer index.
using LayerObserver = std::function<void(std::size_t layer, const Statevector&)>;

Statevector uniform_state(std::size_t n);
void apply_phase(Statevector& psi, const CostDiagonal& cost, double gamma);
/// e^{-i beta X} on every qubit: (a, b) -> (cos beta a - i sin beta b, -i sin beta a + cos beta b).
void apply_mixer(Statevector& psi, std::size_t n, double beta);

Statevector state(const CostDiagonal& cost, std::size_t n, const Params& params,
                  const LayerObserver& observer = {});
Statevector state(const Instance& inst, const Params& params);

/// Deterministic pairwise sums in double-double precision. The expectation is
/// divided by the squared norm, so the uniform state gives exactly mean(cost) for
/// integral costs.
double norm_squared(const Statevector& psi);
double expectation(const Statevector& psi, const CostDiagonal& cost);
double expectation(const Instance& inst, const Params& params);

/// <Z_v> for every qubit.
std::vector<double> magnetizations(const Statevector& psi, std::size_t n);

struct GridResult {
    Params params;
    double value = 0.0;
    std::uint64_t evaluations = 0;
};

/// Maximizes <C> over gamma_k = k pi / r, beta_k = (pi / 2) k / r, k in [0, r).
/// Depth <= 2 scans the full grid. Deeper circuits scan the first two layers fully,
/// start the rest at (0, 0), then run coordinate ascent on the same grid. Ties keep
/// the first point in lexicographic grid order.
GridResult grid_search(const CostDiagonal& cost, std::size_t n, std::size_t p, std::size_t resolution);
GridResult grid_search(const Instance& inst, std::size_t p, std::size_t resolution);

/// Text format: `gamma = [g1, g2, ...]` and `beta = [b1, b2, ...]`, one per line;
/// `#` starts a comment.
void write_params(std::ostream& os, const Params& params);
Params read_params(std::istream& is);

} // namespace ogplab::qaoa
