#include "ogplab/error.hpp"
#include "ogplab/instance.hpp"
#include "ogplab/solve.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace ogplab;

namespace {

SpinConfig random_config(std::size_t n, Rng& rng) {
    SpinConfig z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z.set_bit(i, (rng() >> 63) != 0);
    }
    return z;
}

XorsatInstance with_signs(const Hypergraph& g, std::int8_t sign) {
    return XorsatInstance(g, std::vector<std::int8_t>(g.num_edges(), sign));
}

} // namespace

TEST_CASE("random_couplings: empty, deterministic, balanced") {
    CHECK(random_couplings(Hypergraph(5, 3), 1).couplings().empty());
    const auto g = gen_er_nm(40, 100, 3, 3);
    const auto a = random_couplings(g, 11);
    const auto b = random_couplings(g, 11);
    CHECK(std::equal(a.couplings().begin(), a.couplings().end(), b.couplings().begin()));

    const auto big = gen_er_nm(200, 10000, 3, 5);
    const auto inst = random_couplings(big, 5);
    double sum = 0.0;
    for (const auto j : inst.couplings()) {
        CHECK((j == 1 || j == -1));
        sum += j;
    }
    CHECK(std::abs(sum / 10000.0) < 4.0 / std::sqrt(10000.0));
}

TEST_CASE("XorsatInstance validates couplings") {
    const auto g = gen_er_nm(10, 5, 3, 1);
    CHECK_THROWS_AS(XorsatInstance(g, std::vector<std::int8_t>(4, 1)), ParameterError);
    CHECK_THROWS_AS(XorsatInstance(g, std::vector<std::int8_t>{1, 1, 0, 1, 1}), ParameterError);
    const auto s = instance_stats(random_couplings(g, 1));
    CHECK(s.clause_density == doctest::Approx(0.5));
    CHECK(s.average_degree == doctest::Approx(1.5));
}

TEST_CASE("xorsat_cost: trivial cases and naive recount") {
    const auto g = gen_er_nm(12, 20, 3, 2);
    CHECK(xorsat_cost(with_signs(g, 1), SpinConfig(12)) == 20);
    const auto one = Hypergraph::from_edges(3, 3, {{0, 1, 2}});
    CHECK(xorsat_cost(with_signs(one, -1), SpinConfig(3)) == 0);
    CHECK_THROWS_AS(xorsat_cost(with_signs(g, 1), SpinConfig(11)), ContractViolation);

    const auto inst = random_couplings(gen_er_nm(16, 40, 3, 8), 8);
    Rng rng = make_rng(77);
    for (int t = 0; t < 1000; ++t) {
        const auto z = random_config(16, rng);
        CHECK(xorsat_cost(inst, z) == oracle::xorsat_cost(inst, z.spins()));
    }
}

TEST_CASE("single spin flips change exactly the incident clauses") {
    const auto inst = random_couplings(gen_er_nm(14, 30, 3, 4), 4);
    const Incidence inc(inst.graph());
    Rng rng = make_rng(3);
    for (int t = 0; t < 200; ++t) {
        auto z = random_config(14, rng);
        const auto i = static_cast<std::size_t>(uniform_below(rng, 14));
        const auto before = static_cast<long>(xorsat_cost(inst, z));
        long incident_sat = 0;
        for (const auto e : inc.edges_of(static_cast<Vertex>(i))) {
            int prod = 1;
            for (const auto v : inst.graph().edge(e)) {
                prod *= z.spin(v);
            }
            incident_sat += prod == inst.couplings()[e] ? 1 : 0;
        }
        z.flip(i);
        const auto after = static_cast<long>(xorsat_cost(inst, z));
        const auto deg = static_cast<long>(inc.degree(static_cast<Vertex>(i)));
        CHECK(after - before == deg - 2 * incident_sat);
    }
}

TEST_CASE("cut_fraction: all satisfied, parity flip, random mean") {
    const auto g = gen_er_nm(15, 25, 3, 6);
    CHECK(cut_fraction(with_signs(g, 1), SpinConfig(15)) == 1.0);
    CHECK(cut_fraction(with_signs(g, -1), SpinConfig(15)) == 0.0);
    CHECK(cut_fraction(with_signs(g, 1), SpinConfig(15).negated()) == 0.0);
    CHECK_THROWS_AS(cut_fraction(with_signs(Hypergraph(4, 3), 1), SpinConfig(4)), ContractViolation);

    const auto inst = random_couplings(gen_er_nm(30, 60, 3, 2), 2);
    Rng rng = make_rng(21);
    double sum = 0.0;
    const int samples = 10000;
    for (int t = 0; t < samples; ++t) {
        sum += cut_fraction(inst, random_config(30, rng));
    }
    // Each clause is Bernoulli(1/2) independently of the others under uniform z.
    const double sigma = 0.5 / std::sqrt(60.0 * samples);
    CHECK(std::abs(sum / samples - 0.5) < 3.0 * sigma);
}

TEST_CASE("dense_cost: zero couplings, two-spin formula, naive loops") {
    const DenseSpinInstance zero(DenseModel::QSpin, 6, 3, std::vector<double>(binomial(6, 3), 0.0));
    CHECK(dense_cost(zero, SpinConfig(6)) == 0.0);

    const DenseSpinInstance pair(DenseModel::Sk, 2, 2, {1.0});
    CHECK(dense_cost(pair, SpinConfig(2)) == doctest::Approx(1.0 / std::sqrt(2.0)));

    const auto inst = DenseSpinInstance::qspin(10, 3, 5);
    CHECK(inst.scaling() == doctest::Approx(std::sqrt(6.0 / (2.0 * 100.0))));
    Rng rng = make_rng(9);
    for (int t = 0; t < 100; ++t) {
        const auto z = random_config(10, rng);
        double sum = 0.0;
        std::size_t k = 0;
        for (int a = 0; a < 10; ++a) {
            for (int b = a + 1; b < 10; ++b) {
                for (int c = b + 1; c < 10; ++c) {
                    sum += inst.couplings()[k++] * z.spin(a) * z.spin(b) * z.spin(c);
                }
            }
        }
        const double expected = inst.scaling() * sum;
        CHECK(dense_cost(inst, z) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(dense_cost(inst, z.negated()) == doctest::Approx(-expected).epsilon(1e-12));
    }

    const auto sk = DenseSpinInstance::sk(12, 3);
    CHECK(sk.scaling() == doctest::Approx(1.0 / std::sqrt(12.0)));
    CHECK(sk.num_tuples() == 66);
    for (int t = 0; t < 50; ++t) {
        const auto z = random_config(12, rng);
        CHECK(dense_cost(sk, z) == doctest::Approx(oracle::dense_cost(sk, z.spins())).epsilon(1e-12));
        CHECK(dense_cost(sk, z.negated()) == doctest::Approx(dense_cost(sk, z)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dense_cost(sk, SpinConfig(11)), ContractViolation);
}

TEST_CASE("even q XORSAT cost is invariant under global flip") {
    const auto inst = random_couplings(gen_er_nm(12, 30, 4, 1), 1);
    CHECK(inst.z2_symmetric());
    Rng rng = make_rng(4);
    for (int t = 0; t < 100; ++t) {
        const auto z = random_config(12, rng);
        CHECK(xorsat_cost(inst, z) == xorsat_cost(inst, z.negated()));
    }
}

TEST_CASE("tuple ranks are lexicographic") {
    const auto inst = DenseSpinInstance::qspin(7, 3, 1);
    for (std::size_t k = 0; k < inst.num_tuples(); ++k) {
        CHECK(tuple_rank(inst.tuple(k), 7) == k);
    }
}

TEST_CASE("is_satisfiable: trivial systems") {
    CHECK(is_satisfiable(with_signs(Hypergraph(4, 3), 1)));
    // Every vertex lies in exactly two of these clauses, so their parities must sum to 0.
    const auto g = Hypergraph::from_edges(6, 3, {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}});
    CHECK_FALSE(is_satisfiable(XorsatInstance(g, {1, 1, 1, -1})));
    CHECK(is_satisfiable(XorsatInstance(g, {1, 1, -1, -1})));
}

TEST_CASE("satisfying assignments satisfy every clause") {
    for (Seed s = 0; s < 30; ++s) {
        const auto inst = random_couplings(gen_er_nm(40, 30, 3, s), s);
        const auto w = satisfying_assignment(inst);
        CHECK(w.has_value() == is_satisfiable(inst));
        if (w) {
            CHECK(xorsat_cost(inst, *w) == inst.num_edges());
        }
    }
}

TEST_CASE("satisfiability agrees with the exhaustive optimum") {
    for (Seed s = 0; s < 60; ++s) {
        const auto inst = random_couplings(gen_er_nm(14, 10 + s % 10, 3, s), s);
        const auto costs = oracle::xorsat_costs(inst);
        const double best = *std::max_element(costs.begin(), costs.end());
        CHECK(is_satisfiable(inst) == (best == static_cast<double>(inst.num_edges())));
        CHECK(best >= 0.5 * inst.num_edges());
    }
}

TEST_CASE("satisfiability threshold at n = 60") {
    int sat_low = 0;
    int sat_high = 0;
    for (Seed s = 0; s < 50; ++s) {
        sat_low += is_satisfiable(random_couplings(gen_er_nm(60, 48, 3, s), s)) ? 1 : 0;
        sat_high += is_satisfiable(random_couplings(gen_er_nm(60, 72, 3, s), s)) ? 1 : 0;
    }
    CHECK(sat_low >= 45);
    CHECK(sat_high <= 5);
}

TEST_CASE("instance files round-trip") {
    const auto x = random_couplings(gen_er_nm(10, 12, 3, 3), 3);
    std::stringstream ss;
    write_instance(ss, Instance{x});
    const auto back = read_instance(ss);
    REQUIRE(std::holds_alternative<XorsatInstance>(back));
    const auto& xb = std::get<XorsatInstance>(back);
    CHECK(xb.graph() == x.graph());
    CHECK(std::equal(xb.couplings().begin(), xb.couplings().end(), x.couplings().begin()));

    const auto d = DenseSpinInstance::qspin(6, 3, 2);
    std::stringstream ds;
    write_instance(ds, Instance{d});
    const auto dback = read_instance(ds);
    REQUIRE(std::holds_alternative<DenseSpinInstance>(dback));
    const auto& db = std::get<DenseSpinInstance>(dback);
    CHECK(db.q() == 3);
    for (std::size_t k = 0; k < d.num_tuples(); ++k) {
        CHECK(db.couplings()[k] == d.couplings()[k]);
    }

    std::istringstream bad("3 4 1\n0 1 2\n2\n");
    CHECK_THROWS_AS(read_instance(bad), FormatError);
}
