#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "commimmune/centrality.hpp"
#include "commimmune/community.hpp"
#include "commimmune/error.hpp"
#include "support.hpp"

using namespace commimmune;

namespace {

struct Toy {
    Graph g;
    Partition p;
    NodeId id(const char* label) const { return *g.find(label); }
};

Toy toy() {
    Toy t;
    t.g = fixtures::from_text(fixtures::toy_edges());
    std::istringstream in(fixtures::toy_communities());
    t.p = load_partition(in, t.g);
    return t;
}

std::size_t position(const Ranking& r, NodeId i) {
    return static_cast<std::size_t>(std::find(r.order.begin(), r.order.end(), i) - r.order.begin());
}

}  // namespace

TEST_CASE("fixture values on node c") {
    const Graph g = fixtures::two_triangles();
    const Partition p = fixtures::two_triangles_split();
    const NodeId c = *g.find("c");
    CHECK(neighboring_communities(g, p, c) == 1);
    CHECK(community_hub_bridge(g, p, c) == 7.0);
    CHECK(weighted_community_hub_bridge(g, p, c) == doctest::Approx(14.0 / 9.0).epsilon(1e-12));
    CHECK(comm_measure(g, p, c) == 3.0);
    CHECK(neighboring_communities(g, p, *g.find("a")) == 0);
}

TEST_CASE("edge cases of the measures") {
    const Graph g = fixtures::two_triangles();
    SUBCASE("a single community has no bridges") {
        const Partition one = Partition::single_community(6);
        const auto chb = community_hub_bridge_scores(g, one);
        for (NodeId i = 0; i < 6; ++i) {
            CHECK(neighboring_communities(g, one, i) == 0);
            CHECK(chb.scores[i] == 6.0 * static_cast<double>(g.degree(i)));
        }
    }
    SUBCASE("singleton communities have no hubs") {
        const Partition solo = Partition::singletons(6);
        for (NodeId i = 0; i < 6; ++i) {
            const double k = static_cast<double>(g.degree(i));
            CHECK(community_hub_bridge(g, solo, i) == k * k);
            CHECK(comm_measure(g, solo, i) == k * k);
        }
    }
    SUBCASE("isolated node scores zero everywhere") {
        const Graph h = Graph::from_edges(3, std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
        const Partition p(std::vector<std::uint32_t>{0, 1, 1});
        CHECK(community_hub_bridge(h, p, 2) == 0.0);
        CHECK(weighted_community_hub_bridge(h, p, 2) == 0.0);
        CHECK(comm_measure(h, p, 2) == 0.0);
        CHECK(degree_centrality(h).scores[2] == 0.0);
    }
    SUBCASE("partition mismatch") {
        CHECK_THROWS_AS(neighboring_communities_scores(g, Partition::singletons(4)), DataError);
    }
}

TEST_CASE("measure oracle on random graphs") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> prob(0.1, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + gen() % 50;
        const Graph g = fixtures::random_graph(n, prob(gen), gen);
        const Partition p = fixtures::random_partition(n, 1 + gen() % 8, gen);
        const auto m = oracle::measures(oracle::adjacency(g), oracle::member_lists(p));
        const auto nnc = neighboring_communities_scores(g, p);
        const auto chb = community_hub_bridge_scores(g, p);
        const auto wchb = weighted_community_hub_bridge_scores(g, p);
        const auto comm = comm_scores(g, p);
        const auto deg = degree_centrality(g);
        for (NodeId i = 0; i < n; ++i) {
            CHECK(nnc.scores[i] == static_cast<double>(m.nnc[i]));
            CHECK(chb.scores[i] == static_cast<double>(m.chb[i]));
            CHECK(comm.scores[i] == static_cast<double>(m.comm[i]));
            CHECK(deg.scores[i] == static_cast<double>(m.intra[i] + m.inter[i]));
            const double w = static_cast<double>(m.wchb[i]);
            CHECK(std::abs(wchb.scores[i] - w) <= 1e-12 * std::max(1.0, w));
            CHECK(std::abs(interconnection_density(g, p, p.community_of(i)) - static_cast<double>(m.rho_of_node[i])) <= 1e-12);
            CHECK(weighted_community_hub_bridge(g, p, i) == wchb.scores[i]);
        }
    }
}

TEST_CASE("betweenness against path enumeration") {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + gen() % 29;
        const Graph g = fixtures::random_graph(n, 0.15 + 0.2 * static_cast<double>(trial % 3), gen);
        const auto expect = oracle::betweenness(oracle::adjacency(g));
        const auto got = betweenness_centrality(g);
        for (NodeId i = 0; i < n; ++i) CHECK(got.scores[i] == doctest::Approx(expect[i]).epsilon(1e-9));
    }
}

TEST_CASE("betweenness closed forms and thread invariance") {
    const auto star = betweenness_centrality(fixtures::star(6));
    CHECK(star.scores[0] == 15.0);
    for (NodeId i = 1; i <= 6; ++i) CHECK(star.scores[i] == 0.0);

    std::vector<std::pair<NodeId, NodeId>> path;
    for (NodeId i = 0; i + 1 < 5; ++i) path.emplace_back(i, i + 1);
    const auto line = betweenness_centrality(Graph::from_edges(5, path));
    CHECK(line.scores == std::vector<double>{0, 3, 4, 3, 0});

    std::mt19937_64 gen(3);
    const Graph g = fixtures::random_graph(300, 0.02, gen);
    const auto one = betweenness_centrality(g, 1);
    CHECK(betweenness_centrality(g, 3).scores == one.scores);
    CHECK(betweenness_centrality(g, 8).scores == one.scores);
}

TEST_CASE("toy network anchors") {
    const Toy t = toy();
    REQUIRE(t.g.node_count() == 26);
    REQUIRE(t.p.community_count() == 5);
    const NodeId n5 = t.id("n5");
    const auto nnc = neighboring_communities_scores(t.g, t.p);
    CHECK(nnc.scores[n5] == 3.0);
    CHECK(rank(nnc).order.front() == n5);
    for (NodeId i = 0; i < 26; ++i)
        if (i != n5) CHECK(nnc.scores[i] < 3.0);

    CHECK(interconnection_density(t.g, t.p, t.p.community_of(n5)) == doctest::Approx(0.15).epsilon(0.01 / 0.15));

    const auto chb = community_hub_bridge_scores(t.g, t.p);
    CHECK(chb.scores[t.id("n10")] > chb.scores[t.id("n12")]);
    CHECK(chb.scores[t.id("n6")] > chb.scores[t.id("n16")]);
    CHECK(t.g.degree(t.id("n6")) == t.g.degree(t.id("n16")));

    // WCHB puts C1's bridges ahead of its purely internal members.
    const Ranking w = rank(weighted_community_hub_bridge_scores(t.g, t.p));
    for (const char* bridge : {"n2", "n4", "n5"})
        for (const char* inner : {"n1", "n3", "n6", "n7"}) CHECK(position(w, t.id(bridge)) < position(w, t.id(inner)));
}

TEST_CASE("ranking ties") {
    ScoreMap s{"x", {1.0, 3.0, 3.0, 2.0, 3.0}};
    CHECK(rank(s).order == std::vector<NodeId>{1, 2, 4, 3, 0});

    const Ranking a = rank(s, TieRule::SeededShuffle, 5);
    CHECK(a.order == rank(s, TieRule::SeededShuffle, 5).order);
    CHECK(a.order[3] == 3);
    CHECK(a.order[4] == 0);
    std::vector<NodeId> top(a.order.begin(), a.order.begin() + 3);
    std::sort(top.begin(), top.end());
    CHECK(top == std::vector<NodeId>{1, 2, 4});

    bool varied = false;
    for (std::uint64_t seed = 0; seed < 20 && !varied; ++seed)
        varied = rank(s, TieRule::SeededShuffle, seed).order != a.order;
    CHECK(varied);
}

TEST_CASE("property: ranking is a permutation sorted by score") {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + gen() % 40;
        const Graph g = fixtures::random_graph(n, 0.2, gen);
        const Partition p = fixtures::random_partition(n, 1 + gen() % 4, gen);
        const auto s = community_hub_bridge_scores(g, p);
        const auto r = rank(s);
        auto sorted = r.order;
        std::sort(sorted.begin(), sorted.end());
        for (NodeId i = 0; i < n; ++i) CHECK(sorted[i] == i);
        for (std::size_t k = 1; k < n; ++k) {
            CHECK(s.scores[r.order[k - 1]] >= s.scores[r.order[k]]);
            if (s.scores[r.order[k - 1]] == s.scores[r.order[k]]) CHECK(r.order[k - 1] < r.order[k]);
        }
    }
}
