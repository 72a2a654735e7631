#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "commimmune/error.hpp"
#include "commimmune/strategies.hpp"
#include "support.hpp"

using namespace commimmune;

namespace {

void check_valid_targets(const std::vector<NodeId>& t, std::size_t expect, std::size_t n) {
    CHECK(t.size() == expect);
    CHECK(std::set<NodeId>(t.begin(), t.end()).size() == t.size());
    for (NodeId v : t) CHECK(v < n);
}

}  // namespace

TEST_CASE("coverage count") {
    CHECK(coverage_count(0.1, 2000) == 200);
    CHECK(coverage_count(0.3, 10) == 3);
    CHECK(coverage_count(0.25, 10) == 3);
    CHECK(coverage_count(0.01, 10) == 1);
    CHECK(coverage_count(1.0, 7) == 7);
    CHECK_THROWS_AS(coverage_count(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(coverage_count(1.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(coverage_count(std::nan(""), 10), std::invalid_argument);
}

TEST_CASE("acquaintance") {
    SUBCASE("full coverage of a connected graph takes every node") {
        const Graph g = fixtures::two_cliques();
        auto t = acquaintance(g, 1.0, 3);
        std::sort(t.begin(), t.end());
        CHECK(t == std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    }
    SUBCASE("star center frequency matches the neighbor-selection law") {
        const std::size_t leaves = 20;
        const Graph g = fixtures::star(leaves);
        const double n = static_cast<double>(leaves + 1);
        const int trials = 10000;
        int center = 0;
        for (int s = 0; s < trials; ++s) center += acquaintance(g, 1.0 / n, s).front() == 0 ? 1 : 0;
        CHECK(center / static_cast<double>(trials) == doctest::Approx((n - 1) / n).epsilon(0.01));
    }
    SUBCASE("determinism") {
        const Graph g = fixtures::two_cliques();
        CHECK(acquaintance(g, 0.5, 9) == acquaintance(g, 0.5, 9));
    }
    SUBCASE("errors") {
        const Graph bare = Graph::from_edges(3, std::vector<std::pair<NodeId, NodeId>>{});
        CHECK_THROWS_AS(acquaintance(bare, 0.5, 1), DataError);
        const Graph partial = Graph::from_edges(4, std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
        CHECK_THROWS_AS(acquaintance(partial, 0.75, 1), FeasibilityError);
        CHECK_THROWS_AS(acquaintance(partial, 0.0, 1), std::invalid_argument);
    }
}

TEST_CASE("random-walk strategies return the requested count") {
    const Graph k = fixtures::clique(12);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        check_valid_targets(cbf(k, 0.5, seed), 6, 12);
        check_valid_targets(bhd(k, 0.5, seed), 6, 12);
    }
    // Odd count: the last BHD pair is cut short.
    const Graph g = fixtures::two_cliques();
    for (std::uint64_t seed = 0; seed < 20; ++seed) check_valid_targets(bhd(g, 0.3, seed), 3, 10);
}

TEST_CASE("property: targets are distinct, valid and exactly sized on random graphs") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> cov(0.01, 0.6);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 5 + gen() % 60;
        const Graph g = fixtures::random_graph(n, 0.15, gen);
        if (g.edge_count() == 0) continue;
        const double f = cov(gen);
        const std::size_t want = coverage_count(f, n);
        check_valid_targets(cbf(g, f, gen()), want, n);
        check_valid_targets(bhd(g, f, gen()), want, n);
        try {
            check_valid_targets(acquaintance(g, f, gen()), want, n);
        } catch (const FeasibilityError&) {
            std::size_t reachable = 0;
            for (NodeId v = 0; v < n; ++v) reachable += g.degree(v) > 0 ? 1 : 0;
            CHECK(want > reachable);
        }
    }
}

TEST_CASE("determinism of walk strategies") {
    std::mt19937_64 gen(6);
    const Graph g = fixtures::random_graph(80, 0.06, gen);
    CHECK(cbf(g, 0.2, 44) == cbf(g, 0.2, 44));
    CHECK(bhd(g, 0.2, 44) == bhd(g, 0.2, 44));
    CHECK(cbf(g, 0.2, 44) != cbf(g, 0.2, 45));
}

TEST_CASE("bridge endpoints are over-represented") {
    const Graph g = fixtures::two_cliques();
    const int trials = 10000;
    // Uniform selection would put 2 of 10 nodes at the bridge.
    const double uniform = 0.2;
    const double se = std::sqrt(uniform * (1 - uniform) / trials);

    int cbf_hits = 0;
    int cbf_total = 0;
    int bhd_hits = 0;
    int bhd_total = 0;
    for (int s = 0; s < trials; ++s) {
        for (NodeId v : cbf(g, 0.1, s)) {
            cbf_hits += (v == 4 || v == 5) ? 1 : 0;
            ++cbf_total;
        }
        for (NodeId v : bhd(g, 0.2, s)) {
            bhd_hits += (v == 4 || v == 5) ? 1 : 0;
            ++bhd_total;
        }
    }
    const double cbf_rate = cbf_hits / static_cast<double>(cbf_total);
    const double bhd_rate = bhd_hits / static_cast<double>(bhd_total);
    MESSAGE("cbf bridge rate " << cbf_rate << ", bhd bridge rate " << bhd_rate);
    CHECK(cbf_rate > uniform + 5 * se);
    CHECK(bhd_rate > uniform + 5 * se);
}

TEST_CASE("walk budget exhaustion is reported") {
    const Graph g = fixtures::star(30);
    WalkLimits tight;
    tight.walks_per_target = 1;
    try {
        cbf(g, 1.0, 2, tight);
        FAIL("expected the walk budget to run out");
    } catch (const FeasibilityError& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
    CHECK_THROWS_AS(bhd(g, 1.0, 2, tight), FeasibilityError);
    const Graph bare = Graph::from_edges(3, std::vector<std::pair<NodeId, NodeId>>{});
    CHECK_THROWS_AS(cbf(bare, 0.5, 1), DataError);
    CHECK_THROWS_AS(bhd(bare, 0.5, 1), DataError);
}

TEST_CASE("a zero step cap still terminates") {
    WalkLimits none;
    none.steps_per_node = 0;
    const Graph g = fixtures::two_cliques();
    check_valid_targets(cbf(g, 0.5, 1, none), 5, 10);
    check_valid_targets(bhd(g, 0.5, 1, none), 5, 10);
}
