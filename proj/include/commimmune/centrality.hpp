#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commimmune/graph.hpp"

namespace commimmune {

/// One influence value per node for a named strategy.
struct ScoreMap {
    std::string strategy;
    std::vector<double> scores;
};

enum class TieRule {
    LowerIndex,
    /// Ties broken by a seeded random permutation; for probing how much a
    /// result depends on tie order.
    SeededShuffle,
};

/// Nodes in decreasing score order.
struct Ranking {
    std::vector<NodeId> order;
    TieRule tie_rule = TieRule::LowerIndex;
};

Ranking rank(const ScoreMap& scores, TieRule tie_rule = TieRule::LowerIndex,
             std::uint64_t tie_seed = 0);

// Single-node forms. Each one costs O(degree) plus a partition check.
std::size_t neighboring_communities(const Graph& g, const Partition& p, NodeId i);
double community_hub_bridge(const Graph& g, const Partition& p, NodeId i);
double weighted_community_hub_bridge(const Graph& g, const Partition& p, NodeId i);
double comm_measure(const Graph& g, const Partition& p, NodeId i);

// Batch forms over all nodes in O(N + E).

/// Number of distinct foreign communities among a node's neighbors.
ScoreMap neighboring_communities_scores(const Graph& g, const Partition& p);
/// Card(C_k) * k_intra + nnc * k_inter.
ScoreMap community_hub_bridge_scores(const Graph& g, const Partition& p);
/// rho_k * hub term + (1 - rho_k) * bridge term, rho_k the community's
/// interconnection density.
ScoreMap weighted_community_hub_bridge_scores(const Graph& g, const Partition& p);
/// k_intra + k_inter^2.
ScoreMap comm_scores(const Graph& g, const Partition& p);
ScoreMap degree_centrality(const Graph& g);

/// Unnormalized shortest-path betweenness over unordered pairs, endpoints
/// excluded. Sources are processed in fixed blocks and reduced in block
/// order, so the result does not depend on `threads`.
ScoreMap betweenness_centrality(const Graph& g, unsigned threads = 1);

}  // namespace commimmune
