#include "ogplab/error.hpp"
#include "ogplab/hypergraph.hpp"
#include "ogplab/regularize.hpp"

#include <doctest.h>

#include <cmath>

using namespace ogplab;

namespace {

Hypergraph er_with_degree(std::size_t n, double lambda, Seed seed) {
    const auto m = static_cast<std::size_t>(std::llround(lambda * static_cast<double>(n) / 3.0));
    return gen_er_nm(n, m, 3, seed);
}

} // namespace

TEST_CASE("lambda_prime formula") {
    for (double lambda : {2.0, 3.5, 10.0, 20.0, 30.0, 40.0}) {
        CHECK(lambda_prime(lambda) ==
              static_cast<std::size_t>(std::ceil(lambda + std::sqrt(lambda) * std::log(lambda))));
    }
    CHECK(lambda_prime(10.0) == 18);
    CHECK(lambda_prime(20.0) == 34);
}

TEST_CASE("trim leaves compliant graphs alone") {
    const auto g = gen_regular(30, 6, 3, 2);
    const auto r = trim(g, 6, 1);
    CHECK(r.removed == 0);
    CHECK(r.graph == g);
}

TEST_CASE("trim removes exactly the excess at a single hub") {
    // Hub 0 has degree 7 = lambda' + 3; every leaf has degree 1.
    std::vector<std::vector<Vertex>> edges;
    for (Vertex i = 0; i < 7; ++i) {
        edges.push_back({0, 2 * i + 1, 2 * i + 2});
    }
    const auto g = Hypergraph::from_edges(15, 3, edges);
    const auto r = trim(g, 4, 9);
    CHECK(r.removed == 3);
    CHECK(r.graph.num_edges() == 4);
    CHECK(degree_profile(r.graph).degrees[0] == 4);
}

TEST_CASE("trim never raises a degree and respects the cap") {
    for (Seed s = 0; s < 10; ++s) {
        const auto g = er_with_degree(500, 10.0, s);
        const auto lp = lambda_prime(10.0);
        const auto r = trim(g, lp, s);
        const auto before = degree_profile(g).degrees;
        const auto after = degree_profile(r.graph).degrees;
        CHECK(degree_profile(r.graph).max <= lp);
        CHECK(r.removed == g.num_edges() - r.graph.num_edges());
        for (std::size_t v = 0; v < before.size(); ++v) {
            CHECK(after[v] <= before[v]);
        }
    }
}

TEST_CASE("fill: regular input is unchanged") {
    const auto g = gen_regular(30, 6, 3, 2);
    const auto r = fill(g, 6, 1);
    CHECK(r.added == 0);
    CHECK(r.leftover_deficit == 0);
    CHECK(r.graph == g);
}

TEST_CASE("fill places floor(D/q) edges and reports D mod q") {
    for (Seed s = 0; s < 20; ++s) {
        const auto lp = lambda_prime(6.0);
        const auto g = trim(er_with_degree(301, 6.0, s), lp, s).graph;
        std::size_t deficit = 0;
        const auto before = degree_profile(g).degrees;
        for (const auto d : before) {
            deficit += lp - d;
        }
        const auto r = fill(g, lp, s);
        CHECK(r.added == deficit / 3);
        CHECK(r.leftover_deficit == deficit % 3);
        const auto after = degree_profile(r.graph).degrees;
        std::size_t left = 0;
        for (std::size_t v = 0; v < after.size(); ++v) {
            CHECK(after[v] >= before[v]);
            CHECK(after[v] <= lp);
            left += lp - after[v];
        }
        CHECK(left == r.leftover_deficit);
    }
}

TEST_CASE("fill rejects over-degree input") {
    const auto g = gen_regular(30, 6, 3, 2);
    CHECK_THROWS_AS(fill(g, 5, 1), ParameterError);
}

TEST_CASE("regularize reports and output degree structure") {
    const auto g = er_with_degree(999, 10.0, 4);
    const auto [out, rep] = regularize(g, 10.0, 2, 4);
    CHECK(rep.lambda_prime == lambda_prime(10.0));
    CHECK(degree_profile(out).max == rep.lambda_prime);
    CHECK(rep.removed_fraction == doctest::Approx(static_cast<double>(rep.edges_removed) / g.num_edges()));
    CHECK(out.num_edges() == g.num_edges() - rep.edges_removed + rep.edges_added);
    if (rep.leftover_deficit == 0) {
        CHECK(degree_profile(out).min == rep.lambda_prime);
        CHECK(out.num_edges() * 3 == 999 * rep.lambda_prime);
    }
    CHECK_THROWS_AS(regularize(g, 1.5, 2, 4), ParameterError);
}

TEST_CASE("regularize is the identity on lambda'-regular input") {
    const double lambda = 6.0;
    const auto lp = lambda_prime(lambda);
    const std::size_t n = 3 * 40;
    const auto g = gen_regular(n, lp, 3, 3);
    const auto [out, rep] = regularize(g, lambda, 1, 5);
    CHECK(out == g);
    CHECK(rep.edges_removed == 0);
    CHECK(rep.edges_added == 0);
}

TEST_CASE("removed fraction stays small at n = 5000, lambda = 30 and decays in lambda") {
    double mean20 = 0.0;
    double mean30 = 0.0;
    for (Seed s = 0; s < 20; ++s) {
        const auto lp30 = lambda_prime(30.0);
        const auto g30 = er_with_degree(5000, 30.0, s);
        const double f30 = static_cast<double>(trim(g30, lp30, s).removed) / g30.num_edges();
        CHECK(f30 <= 0.05);
        mean30 += f30 / 20.0;
        const auto g20 = er_with_degree(5000, 20.0, s);
        mean20 += static_cast<double>(trim(g20, lambda_prime(20.0), s).removed) / g20.num_edges() / 20.0;
    }
    CHECK(mean30 < mean20);
}

TEST_CASE("mean degree excess sits under the Chernoff envelope") {
    for (double lambda : {5.0, 10.0}) {
        const auto lp = lambda_prime(lambda);
        double sum = 0.0;
        double sq = 0.0;
        const int seeds = 50;
        for (Seed s = 0; s < seeds; ++s) {
            const double x = mean_degree_excess(er_with_degree(2001, lambda, s), lp);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / seeds;
        const double se = std::sqrt(std::max(0.0, sq / seeds - mean * mean) / seeds);
        CHECK(mean - 3.0 * se <= degree_excess_envelope(static_cast<double>(lp)));
    }
    // sqrt(3 pi lambda') is the closed form of the integral.
    CHECK(degree_excess_envelope(18.0) == doctest::Approx(std::sqrt(3.0 * M_PI * 18.0)).epsilon(1e-6));
}

TEST_CASE("fill keeps n = 3000, lambda = 30 balls treelike at radius 2" * doctest::should_fail()) {
    double sum = 0.0;
    const int seeds = 20;
    for (Seed s = 0; s < seeds; ++s) {
        sum += regularize(er_with_degree(3000, 30.0, s), 30.0, 2, s).report.treelike_after;
    }
    INFO("mean treelike_after " << sum / seeds);
    CHECK(sum / seeds >= 0.95);
}
