#include "ogplab/error.hpp"
#include "ogplab/hypergraph.hpp"
#include "oracles.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

using namespace ogplab;

namespace {

void check_invariants(const Hypergraph& g) {
    std::set<std::vector<Vertex>> seen;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto edge = g.edge(e);
        REQUIRE(edge.size() == g.q());
        for (std::size_t k = 0; k < edge.size(); ++k) {
            REQUIRE(edge[k] < g.n());
            if (k > 0) {
                REQUIRE(edge[k - 1] < edge[k]);
            }
        }
        REQUIRE(seen.insert(std::vector<Vertex>(edge.begin(), edge.end())).second);
    }
    const auto prof = degree_profile(g);
    REQUIRE(std::accumulate(prof.degrees.begin(), prof.degrees.end(), std::size_t{0}) == g.q() * g.num_edges());
}

Hypergraph hyperpath(std::size_t edges) {
    // Consecutive 3-edges sharing one vertex: {0,1,2}, {2,3,4}, ...
    std::vector<std::vector<Vertex>> e;
    for (std::size_t i = 0; i < edges; ++i) {
        const auto b = static_cast<Vertex>(2 * i);
        e.push_back({b, b + 1, b + 2});
    }
    return Hypergraph::from_edges(2 * edges + 1, 3, e);
}

} // namespace

TEST_CASE("hypergraph construction canonicalizes and validates edges") {
    const auto g = Hypergraph::from_edges(5, 3, {{4, 0, 2}, {1, 3, 2}});
    CHECK(g.edge(0)[0] == 0);
    CHECK(g.edge(0)[2] == 4);
    CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 0, 1}}), ParameterError);
    CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1, 5}}), ParameterError);
    CHECK_THROWS_AS(Hypergraph::from_edges(5, 3, {{0, 1, 2}, {2, 1, 0}}), ParameterError);
    CHECK_THROWS_AS(Hypergraph(5, 1), ParameterError);
}

TEST_CASE("gen_er_nm: saturated graph, handshake, determinism") {
    const auto full = gen_er_nm(4, 4, 3, 99);
    CHECK(full.num_edges() == 4);
    check_invariants(full);

    const auto g = gen_er_nm(30, 150, 3, 7);
    check_invariants(g);
    CHECK(degree_profile(g).mean == doctest::Approx(15.0));
    CHECK(gen_er_nm(30, 150, 3, 7) == g);
    CHECK_FALSE(gen_er_nm(30, 150, 3, 8) == g);

    CHECK_THROWS_AS(gen_er_nm(4, 5, 3, 1), ParameterError);
    CHECK_THROWS_AS(gen_er_nm(2, 0, 3, 1), ParameterError);
}

TEST_CASE("gen_er_nm degrees follow Binomial(m, q/n) by a chi-square test") {
    const std::size_t n = 1000;
    const std::size_t m = 5000;
    const std::size_t q = 3;
    std::vector<std::uint64_t> hist(200, 0);
    std::uint64_t samples = 0;
    for (Seed s = 0; s < 200; ++s) {
        for (const auto d : degree_profile(gen_er_nm(n, m, q, s)).degrees) {
            ++hist[std::min<std::size_t>(d, hist.size() - 1)];
            ++samples;
        }
    }
    boost::math::binomial_distribution<double> law(static_cast<double>(m), static_cast<double>(q) / n);
    // Bins with expected count >= 5; tails merged into the end bins.
    std::vector<double> expected;
    std::vector<double> observed;
    double exp_acc = 0.0;
    double obs_acc = 0.0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        const double p = k + 1 == hist.size() ? boost::math::cdf(boost::math::complement(law, k - 1.0))
                                              : boost::math::pdf(law, static_cast<double>(k));
        exp_acc += p * static_cast<double>(samples);
        obs_acc += static_cast<double>(hist[k]);
        if (exp_acc >= 5.0) {
            expected.push_back(exp_acc);
            observed.push_back(obs_acc);
            exp_acc = obs_acc = 0.0;
        }
    }
    expected.back() += exp_acc;
    observed.back() += obs_acc;
    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    }
    boost::math::chi_squared_distribution<double> chi(static_cast<double>(expected.size() - 1));
    const double p_value = boost::math::cdf(boost::math::complement(chi, stat));
    INFO("chi2 = " << stat << " over " << expected.size() << " bins");
    CHECK(p_value > 0.01);
}

TEST_CASE("gen_er_np: empty, complete, and mean edge count") {
    CHECK(gen_er_np(10, 0.0, 3, 1).num_edges() == 0);
    CHECK(gen_er_np(7, 1.0, 3, 1).num_edges() == binomial(7, 3));
    CHECK_THROWS_AS(gen_er_np(10, 1.5, 3, 1), ParameterError);

    const double c = static_cast<double>(binomial(20, 3));
    const double p = 40.0 / c;
    double sum = 0.0;
    for (Seed s = 0; s < 500; ++s) {
        const auto g = gen_er_np(20, p, 3, s);
        check_invariants(g);
        sum += static_cast<double>(g.num_edges());
    }
    const double se = std::sqrt(c * p * (1 - p) / 500.0);
    CHECK(std::abs(sum / 500.0 - 40.0) < 3.0 * se);
}

TEST_CASE("gen_regular: exact degrees, simplicity, girth") {
    const auto small = gen_regular(6, 3, 3, 5);
    CHECK(small.num_edges() == 6);
    CHECK(degree_profile(small).min == 3);
    CHECK(degree_profile(small).max == 3);

    const auto g = gen_regular(30, 15, 3, 1);
    CHECK(g.num_edges() == 150);
    const auto prof = degree_profile(g);
    CHECK(prof.min == 15);
    CHECK(prof.max == 15);
    check_invariants(g);

    for (Seed s = 0; s < 100; ++s) {
        const auto h = gen_regular(12, 2, 3, s);
        check_invariants(h);
        CHECK(degree_profile(h).min == 2);
        CHECK(degree_profile(h).max == 2);
        const auto gi = girth(h);
        CHECK((!gi || *gi >= 2));
    }
    CHECK_THROWS_AS(gen_regular(10, 2, 3, 1), ParameterError);
    CHECK(gen_regular(30, 15, 3, 4) == gen_regular(30, 15, 3, 4));
}

TEST_CASE("degree profile of empty and single-edge graphs") {
    const auto empty = degree_profile(Hypergraph(4, 3));
    CHECK(empty.degrees == std::vector<std::size_t>(4, 0));
    CHECK(empty.mean == 0.0);
    const auto one = degree_profile(Hypergraph::from_edges(3, 3, {{0, 1, 2}}));
    CHECK(one.degrees == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("neighborhoods: radius 0, star, Berge triangle") {
    const auto g = hyperpath(3);
    const auto nb0 = neighborhood(g, 2, 0);
    CHECK(nb0.vertices == std::vector<Vertex>{2});
    CHECK(nb0.is_tree);

    const auto star = Hypergraph::from_edges(7, 3, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}});
    const auto nb = neighborhood(star, 0, 1);
    CHECK(nb.vertices.size() == 7);
    CHECK(nb.is_tree);

    // Three 3-edges pairwise sharing one vertex: a Berge cycle of length 3.
    const auto tri = Hypergraph::from_edges(6, 3, {{0, 1, 3}, {1, 2, 4}, {0, 2, 5}});
    for (Vertex v = 0; v < 6; ++v) {
        CHECK_FALSE(neighborhood(tri, v, 2).is_tree);
        CHECK(oracle::ball_has_cycle(tri, v, 2));
    }
}

TEST_CASE("neighborhood tree flag agrees with explicit walk enumeration") {
    for (Seed s = 0; s < 30; ++s) {
        const auto g = gen_er_nm(14, 8, 3, s);
        const Incidence inc(g);
        for (Vertex v = 0; v < g.n(); ++v) {
            for (std::size_t p = 0; p <= 3; ++p) {
                const bool tree = neighborhood(g, v, p).is_tree;
                CHECK(tree == !oracle::ball_has_cycle(g, v, p));
                CHECK(tree == is_treelike_at(g, inc, v, p));
            }
        }
    }
}

TEST_CASE("neighborhoods grow monotonically with radius") {
    const auto g = gen_er_nm(200, 150, 3, 3);
    for (Vertex v = 0; v < 20; ++v) {
        for (std::size_t p = 0; p < 4; ++p) {
            auto a = neighborhood(g, v, p).vertices;
            auto b = neighborhood(g, v, p + 1).vertices;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        }
    }
}

TEST_CASE("girth of hypertrees, doubled pairs, and regular samples") {
    CHECK_FALSE(girth(hyperpath(5)).has_value());
    CHECK(girth(Hypergraph::from_edges(4, 3, {{0, 1, 2}, {0, 1, 3}})) == 2);
    CHECK(girth(Hypergraph::from_edges(6, 3, {{0, 1, 3}, {1, 2, 4}, {0, 2, 5}})) == 3);
    for (Seed s = 0; s < 50; ++s) {
        const auto g = gen_regular(60, 4, 3, s);
        const auto gi = girth(g);
        REQUIRE(gi.has_value());
        CHECK(static_cast<double>(*gi) <= girth_upper_bound(60, 4, 3));
    }
}

TEST_CASE("treelike fraction: hypertree and complete hypergraph") {
    CHECK(treelike_fraction(hyperpath(4), 3) == 1.0);
    const auto k5 = gen_er_np(5, 1.0, 3, 0);
    CHECK(treelike_fraction(k5, 2) == 0.0);
    for (Vertex v = 0; v < 5; ++v) {
        CHECK(oracle::ball_has_cycle(k5, v, 2));
    }
}

TEST_CASE("treelike fraction of sparse G(n, m) at n = 2000 reaches 0.9" * doctest::should_fail()) {
    double sum = 0.0;
    for (Seed s = 0; s < 20; ++s) {
        sum += treelike_fraction(gen_er_nm(2000, 2000, 3, s), 2);
    }
    INFO("mean treelike fraction " << sum / 20.0);
    CHECK(sum / 20.0 >= 0.9);
}

TEST_CASE("treelike fraction at fixed average degree does not decrease with n") {
    double prev = -1.0;
    for (std::size_t n : {250, 500, 1000, 2000}) {
        double sum = 0.0;
        for (Seed s = 0; s < 20; ++s) {
            sum += treelike_fraction(gen_er_nm(n, n, 3, s), 2);
        }
        const double mean = sum / 20.0;
        INFO("n = " << n << " mean " << mean);
        CHECK(mean >= prev);
        prev = mean;
    }
}

TEST_CASE("hypergraph text format round-trips and rejects bad input") {
    const auto g = gen_er_nm(12, 10, 3, 2);
    std::stringstream ss;
    write_hypergraph(ss, g);
    CHECK(read_hypergraph(ss) == g);

    std::istringstream bad("3 5 2\n0 1 2\n0 1\n");
    CHECK_THROWS_AS(read_hypergraph(bad), FormatError);
    std::istringstream dup("3 5 2\n0 1 2\n2 1 0\n");
    CHECK_THROWS_AS(read_hypergraph(dup), FormatError);
}

TEST_CASE("binomial coefficients and girth bound formula") {
    CHECK(binomial(30, 3) == 4060);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(200, 100) == std::numeric_limits<std::uint64_t>::max());
    CHECK(girth_upper_bound(60, 4, 3) ==
          doctest::Approx(2.0 * std::log(60.0) / (std::log(2.0) + std::log(3.0)) + 2.0));
}
