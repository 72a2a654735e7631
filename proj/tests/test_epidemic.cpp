#include "doctest.h"

#include <cmath>
#include <random>

#include "commimmune/centrality.hpp"
#include "commimmune/community.hpp"
#include "commimmune/epidemic.hpp"
#include "commimmune/error.hpp"
#include "commimmune/random.hpp"
#include "support.hpp"

using namespace commimmune;

TEST_CASE("relative difference") {
    CHECK(relative_difference(100, 80) == doctest::Approx(0.2));
    CHECK(relative_difference(42, 42) == 0.0);
    CHECK(relative_difference(50, 75) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(relative_difference(0, 5), DataError);
    CHECK_THROWS_AS(relative_difference(-1, 5), DataError);
}

TEST_CASE("lambda zero infects only the seed") {
    std::mt19937_64 gen(1);
    const Graph g = fixtures::random_graph(60, 0.1, gen);
    SirConfig cfg;
    cfg.lambda = 0.0;
    cfg.runs = 200;
    const auto out = sir_ensemble(g, {}, cfg);
    CHECK(out.mean_epidemic_size == 1.0);
    CHECK(out.sd == 0.0);
}

TEST_CASE("certain transmission reaches the whole component") {
    std::mt19937_64 gen(2);
    SirConfig cfg;
    cfg.lambda = 1.0;
    cfg.gamma = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + gen() % 60;
        const Graph g = fixtures::random_graph(n, 1.5 / static_cast<double>(n), gen);
        const auto initial = immunize(g, {});
        const std::vector<bool> removed(n, false);
        for (std::uint64_t r = 0; r < 5; ++r) {
            const auto run = sir_run(g, initial, cfg, gen());
            CHECK(run.epidemic_size == oracle::component_size(g, run.seed, removed));
        }
    }
}

TEST_CASE("immunized nodes block transmission") {
    // Path 0-1-2-3-4 with 2 immunized.
    std::vector<std::pair<NodeId, NodeId>> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    const Graph g = Graph::from_edges(5, e);
    const std::vector<NodeId> targets{2};
    const auto initial = immunize(g, targets);
    SirConfig cfg;
    cfg.lambda = 1.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto run = sir_run(g, initial, cfg, s);
        CHECK(run.seed != 2);
        CHECK(run.epidemic_size == 2);
    }
}

TEST_CASE("property: only S->I and I->R transitions, size within the reduced component") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + gen() % 60;
        const Graph g = fixtures::random_graph(n, 0.1, gen);
        std::vector<NodeId> targets;
        std::vector<bool> removed(n, false);
        for (NodeId v = 0; v < n; ++v)
            if (gen() % 5 == 0) {
                targets.push_back(v);
                removed[v] = true;
            }
        if (targets.size() == n) continue;
        SirConfig cfg;
        cfg.lambda = 0.5;
        cfg.gamma = 0.4;
        std::vector<NodeState> state = immunize(g, targets);
        bool legal = true;
        const auto run = sir_run(g, state, cfg, gen(), [&](NodeId v, NodeState from, NodeState to) {
            legal = legal && from == state[v] && !removed[v] &&
                    ((from == NodeState::Susceptible && to == NodeState::Infected) ||
                     (from == NodeState::Infected && to == NodeState::Recovered));
            state[v] = to;
        });
        CHECK(legal);
        CHECK(run.epidemic_size >= 1);
        CHECK(run.epidemic_size <= oracle::component_size(g, run.seed, removed));
        std::size_t recovered = 0;
        for (NodeId v = 0; v < n; ++v) {
            CHECK(state[v] != NodeState::Infected);
            recovered += (state[v] == NodeState::Recovered && !removed[v]) ? 1 : 0;
        }
        CHECK(recovered == run.epidemic_size);
    }
}

TEST_CASE("sir errors and validation") {
    const Graph g = fixtures::two_triangles();
    const std::vector<NodeId> all{0, 1, 2, 3, 4, 5};
    CHECK_THROWS_AS(sir_ensemble(g, all, SirConfig{}), DataError);
    SirConfig bad;
    bad.lambda = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SirConfig{};
    bad.gamma = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SirConfig{};
    bad.runs = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ensemble statistics and worker invariance") {
    std::mt19937_64 gen(4);
    const Graph g = fixtures::random_graph(200, 0.02, gen);
    SirConfig cfg;
    cfg.lambda = 0.4;
    cfg.gamma = 0.5;
    cfg.runs = 300;
    cfg.master_seed = 77;
    const auto one = sir_ensemble(g, {}, cfg);
    cfg.threads = 4;
    const auto four = sir_ensemble(g, {}, cfg);
    CHECK(one.per_run_sizes == four.per_run_sizes);
    CHECK(one.mean_epidemic_size == four.mean_epidemic_size);
    CHECK(one.sd == four.sd);

    // Run r is seeded with derive_seed(master, r).
    const auto initial = immunize(g, {});
    CHECK(sir_run(g, initial, cfg, derive_seed(77, 17)).epidemic_size == one.per_run_sizes[17]);

    double mean = 0.0;
    for (auto s : one.per_run_sizes) mean += static_cast<double>(s);
    mean /= 300.0;
    double ss = 0.0;
    for (auto s : one.per_run_sizes) ss += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
    CHECK(one.mean_epidemic_size == doctest::Approx(mean).epsilon(1e-12));
    CHECK(one.sd == doctest::Approx(std::sqrt(ss / 299.0)).epsilon(1e-12));
    CHECK(one.standard_error() == doctest::Approx(one.sd / std::sqrt(300.0)).epsilon(1e-12));
}

TEST_CASE("mean epidemic size does not grow with coverage along a ranking") {
    const Graph g = fixtures::two_cliques();
    const Partition p = louvain(g, 1);
    const Ranking order = rank(community_hub_bridge_scores(g, p));
    SirConfig cfg;
    cfg.lambda = 0.5;
    cfg.runs = 600;
    cfg.master_seed = 5;
    double previous_mean = 1e18;
    double previous_se = 0.0;
    for (double f : {0.1, 0.2, 0.3, 0.5, 0.7}) {
        const auto targets = ranking_prefix(order, f);
        const auto out = sir_ensemble(g, targets, cfg);
        const double se = out.standard_error();
        CHECK(out.mean_epidemic_size <= previous_mean + 2.0 * std::sqrt(se * se + previous_se * previous_se));
        previous_mean = out.mean_epidemic_size;
        previous_se = se;
    }
}

TEST_CASE("ranking prefix") {
    Ranking r;
    r.order = {4, 2, 0, 1, 3};
    CHECK(ranking_prefix(r, 0.4) == std::vector<NodeId>{4, 2});
    CHECK(ranking_prefix(r, 1.0).size() == 5);
    CHECK_THROWS_AS(ranking_prefix(r, 0.0), std::invalid_argument);
}
