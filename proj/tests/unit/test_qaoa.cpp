#include "ogplab/error.hpp"
#include "ogplab/qaoa.hpp"
#include "ogplab/solve.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace ogplab;
using qaoa::Params;

namespace {

Params random_params(std::size_t p, Rng& rng) {
    Params prm;
    for (std::size_t k = 0; k < p; ++k) {
        prm.gammas.push_back(2.0 * std::numbers::pi * uniform01(rng));
        prm.betas.push_back(std::numbers::pi * uniform01(rng));
    }
    return prm;
}

XorsatInstance small_instance(std::size_t n, std::size_t m, Seed seed) {
    return random_couplings(gen_er_nm(n, m, 3, seed), seed);
}

} // namespace

TEST_CASE("cost diagonal: empty, single clause, pointwise") {
    const auto empty = qaoa::build_cost_diagonal(XorsatInstance(Hypergraph(5, 3), {}));
    CHECK(empty == qaoa::CostDiagonal(32, 0.0));

    const auto single = qaoa::build_cost_diagonal(XorsatInstance(Hypergraph::from_edges(6, 3, {{1, 3, 4}}), {-1}));
    CHECK(std::count(single.begin(), single.end(), 1.0) == 32);
    CHECK(std::count(single.begin(), single.end(), 0.0) == 32);

    const auto inst = small_instance(12, 30, 3);
    const auto diag = qaoa::build_cost_diagonal(inst);
    for (std::uint64_t b = 0; b < diag.size(); ++b) {
        CHECK(diag[b] == static_cast<double>(xorsat_cost(inst, SpinConfig::from_bits(12, b))));
    }

    const auto dense = DenseSpinInstance::qspin(9, 3, 2);
    const auto ddiag = qaoa::build_cost_diagonal(dense);
    for (std::uint64_t b = 0; b < ddiag.size(); b += 7) {
        CHECK(ddiag[b] == doctest::Approx(oracle::dense_cost(dense, oracle::spins_of(b, 9))).epsilon(1e-12));
    }

    CHECK_THROWS_AS(qaoa::build_cost_diagonal(small_instance(25, 10, 1)), CapacityError);
}

TEST_CASE("trivial circuits leave the uniform superposition") {
    const auto inst = small_instance(8, 10, 1);
    const auto uniform = qaoa::uniform_state(8);
    for (const auto& prm : {Params{}, Params{{0.0, 0.0}, {0.0, 0.0}}}) {
        const auto psi = qaoa::state(Instance{inst}, prm);
        for (std::size_t b = 0; b < psi.size(); ++b) {
            CHECK(std::abs(psi[b] - uniform[b]) < 1e-15);
        }
    }
    for (std::size_t n = 5; n <= 14; ++n) {
        const auto x = small_instance(n, n + 1, n);
        CHECK(qaoa::expectation(Instance{x}, Params{{0.0, 0.0}, {0.0, 0.0}}) == static_cast<double>(n + 1) / 2.0);
    }
    CHECK(std::abs(qaoa::expectation(Instance{DenseSpinInstance::sk(10, 3)}, Params{})) < 1e-12);
    CHECK_THROWS_AS(Params({1.0}, {}).validate(), ParameterError);
}

TEST_CASE("statevector matches the explicit matrix oracle") {
    Rng rng = make_rng(17);
    const auto inst = small_instance(10, 25, 6);
    const auto diag = qaoa::build_cost_diagonal(inst);
    for (int t = 0; t < 5; ++t) {
        const auto prm = random_params(2, rng);
        const auto psi = qaoa::state(diag, 10, prm);
        const auto ref = oracle::qaoa_state(diag, 10, prm);
        for (std::size_t b = 0; b < psi.size(); ++b) {
            CHECK(std::abs(psi[b] - ref[b]) < 1e-10);
        }
    }
    for (int t = 0; t < 20; ++t) {
        const auto prm = random_params(1, rng);
        CHECK(std::abs(qaoa::expectation(Instance{inst}, prm) - oracle::qaoa_expectation(diag, 10, prm)) < 1e-10);
    }
    const auto sk = DenseSpinInstance::sk(8, 1);
    const auto sdiag = qaoa::build_cost_diagonal(sk);
    const auto prm = random_params(3, rng);
    CHECK(std::abs(qaoa::expectation(Instance{sk}, prm) - oracle::qaoa_expectation(sdiag, 8, prm)) < 1e-10);
}

TEST_CASE("norm is preserved after every layer") {
    Rng rng = make_rng(2);
    const auto inst = small_instance(12, 40, 2);
    const auto diag = qaoa::build_cost_diagonal(inst);
    std::size_t layers = 0;
    qaoa::state(diag, 12, random_params(4, rng), [&](std::size_t layer, const qaoa::Statevector& psi) {
        ++layers;
        CHECK(layer == layers);
        CHECK(std::abs(qaoa::norm_squared(psi) - 1.0) < 1e-10);
    });
    CHECK(layers == 4);
}

TEST_CASE("expectation stays within cost bounds") {
    Rng rng = make_rng(8);
    for (Seed s = 0; s < 10; ++s) {
        const auto inst = small_instance(12, 30, s);
        const double opt = exhaustive_max(inst).value;
        const auto prm = random_params(1 + s % 3, rng);
        const double e = qaoa::expectation(Instance{inst}, prm);
        CHECK(e >= -1e-12);
        CHECK(e <= opt + 1e-9);
    }
}

TEST_CASE("XORSAT expectation is periodic in gamma and beta") {
    Rng rng = make_rng(4);
    const auto inst = Instance{small_instance(10, 20, 4)};
    for (int t = 0; t < 5; ++t) {
        const auto prm = random_params(2, rng);
        const double e = qaoa::expectation(inst, prm);
        auto shifted = prm;
        shifted.gammas[0] += 2.0 * std::numbers::pi;
        shifted.betas[1] += std::numbers::pi;
        CHECK(std::abs(qaoa::expectation(inst, shifted) - e) < 1e-11);
    }
}

TEST_CASE("magnetizations depend only on the local neighborhood") {
    // {0,1,2} + {1,3,4} + {2,3,4} = {0}, so no spin flip preserving every clause moves
    // vertex 0 alone and <Z_0> need not vanish. A path leads away from the triangle.
    std::vector<std::vector<Vertex>> edges{{0, 1, 2}, {1, 3, 4}, {2, 3, 4}, {4, 5, 6}, {6, 7, 8}, {8, 9, 10}};
    std::vector<std::int8_t> signs{1, -1, 1, 1, -1, 1};
    const auto a = XorsatInstance(Hypergraph::from_edges(13, 3, edges), signs);
    auto far_edges = edges;
    far_edges.push_back({10, 11, 12});
    auto far_signs = signs;
    far_signs.push_back(-1);
    const auto b = XorsatInstance(Hypergraph::from_edges(13, 3, far_edges), far_signs);
    auto near_edges = edges;
    near_edges.push_back({0, 7, 11});
    const auto c = XorsatInstance(Hypergraph::from_edges(13, 3, near_edges), far_signs);

    const auto da = qaoa::build_cost_diagonal(a);
    const auto db = qaoa::build_cost_diagonal(b);
    const auto dc = qaoa::build_cost_diagonal(c);
    Rng rng = make_rng(12);
    double largest = 0.0;
    double changed = 0.0;
    for (std::size_t p = 1; p <= 2; ++p) {
        for (int t = 0; t < 4; ++t) {
            const auto prm = random_params(p, rng);
            const auto ma = qaoa::magnetizations(qaoa::state(da, 13, prm), 13);
            const auto mb = qaoa::magnetizations(qaoa::state(db, 13, prm), 13);
            // Vertices 0 and 1 are at least three hops from the extra clause.
            CHECK(std::abs(ma[0] - mb[0]) < 1e-9);
            CHECK(std::abs(ma[1] - mb[1]) < 1e-9);
            largest = std::max(largest, std::abs(ma[0]));
            if (p == 2) {
                const auto mc = qaoa::magnetizations(qaoa::state(dc, 13, prm), 13);
                changed = std::max(changed, std::abs(mc[0] - ma[0]));
            }
        }
    }
    CHECK(largest > 1e-3);
    CHECK(changed > 1e-3);
}

TEST_CASE("grid search") {
    const auto inst = Instance{small_instance(8, 12, 1)};
    const auto one = qaoa::grid_search(inst, 1, 1);
    CHECK(one.params == Params{{0.0}, {0.0}});
    CHECK(one.value == doctest::Approx(6.0));
    CHECK(one.evaluations == 1);

    const auto clause = XorsatInstance(Hypergraph::from_edges(3, 3, {{0, 1, 2}}), {1});
    const auto diag = qaoa::build_cost_diagonal(clause);
    const auto best = qaoa::grid_search(Instance{clause}, 1, 64);
    double oracle_best = -1.0;
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const Params prm{{i * std::numbers::pi / 64}, {j * std::numbers::pi / 128}};
            oracle_best = std::max(oracle_best, oracle::qaoa_expectation(diag, 3, prm));
        }
    }
    CHECK(best.value == doctest::Approx(oracle_best).epsilon(1e-12));
    CHECK(best.value > 0.5);

    for (std::size_t p : {1, 2}) {
        double prev = -1.0;
        for (std::size_t r : {2, 4, 8}) {
            const double v = qaoa::grid_search(inst, p, r).value;
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
    const auto deep = qaoa::grid_search(inst, 3, 4);
    CHECK(deep.params.depth() == 3);
    CHECK(deep.value >= qaoa::grid_search(inst, 1, 4).value - 1e-12);
    CHECK(qaoa::grid_search(inst, 2, 6).params == qaoa::grid_search(inst, 2, 6).params);
}

TEST_CASE("parameter files round-trip") {
    const Params prm{{0.1, 0.25}, {1.5, -0.75}};
    std::stringstream ss;
    qaoa::write_params(ss, prm);
    CHECK(qaoa::read_params(ss) == prm);

    std::istringstream commented("# comment\ngamma = [0.5]  # trailing\n\nbeta = [0.25]\n");
    CHECK(qaoa::read_params(commented) == Params{{0.5}, {0.25}});

    std::istringstream mismatched("gamma = [0.5, 0.1]\nbeta = [0.25]\n");
    CHECK_THROWS_AS(qaoa::read_params(mismatched), FormatError);
    std::istringstream garbage("gamma = [x]\nbeta = []\n");
    CHECK_THROWS_AS(qaoa::read_params(garbage), FormatError);
}
