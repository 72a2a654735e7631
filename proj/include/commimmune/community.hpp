#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "commimmune/graph.hpp"

namespace commimmune {

/// Newman-Girvan modularity: sum over communities of e_c/E - (d_c/2E)^2.
/// Throws DataError on a graph without edges.
double modularity(const Graph& g, const Partition& p);

struct LouvainResult {
    Partition partition;
    /// Modularity tracked incrementally by the optimizer.
    double modularity = 0.0;
    /// Modularity at the end of each aggregation level, non-decreasing.
    std::vector<double> level_modularity;
};

/// Two-phase Louvain optimization. Node sweep order at each level is a
/// shuffle seeded from `seed`; ties in gain go to the lowest community id.
/// A level ends when a full sweep gains less than 1e-9.
LouvainResult run_louvain(const Graph& g, std::uint64_t seed);
Partition louvain(const Graph& g, std::uint64_t seed);

enum class MixingEstimator {
    /// Sum of inter-degrees over sum of degrees.
    EdgeFraction,
    /// Mean over non-isolated nodes of inter_degree / degree.
    NodeMean,
};

double estimate_mixing(const Graph& g, const Partition& p,
                       MixingEstimator estimator = MixingEstimator::EdgeFraction);

/// Mean over members of k_inter / (k_inter + k_intra); isolated members
/// contribute 0.
double interconnection_density(const Graph& g, const Partition& p, CommunityId k);

struct CommunityStats {
    CommunityId community = 0;
    std::size_t size = 0;
    std::size_t internal_edge_count = 0;
    double interconnection_density = 0.0;
};

std::vector<CommunityStats> community_stats(const Graph& g, const Partition& p);

/// Parses `node community` lines against the graph's label table. Every
/// node must appear exactly once.
Partition load_partition(std::istream& in, const Graph& g);
Partition load_partition_file(const std::string& path, const Graph& g);
void save_partition(std::ostream& out, const Graph& g, const Partition& p);

}  // namespace commimmune
