#pragma once

#include <cstdint>
#include <vector>

#include "commimmune/graph.hpp"

namespace commimmune {

/// Number of nodes immunized at coverage fraction f: ceil(f * N), with a
/// small guard so that e.g. 0.1 * 2000 maps to 200 rather than 201.
std::size_t coverage_count(double coverage, std::size_t node_count);

/// Pick a uniform node, immunize a uniform neighbor of it; repeat until
/// ceil(coverage * N) distinct nodes are chosen. Selection order is kept.
std::vector<NodeId> acquaintance(const Graph& g, double coverage, std::uint64_t seed);

/// Community Bridge Finder random walks. A walk that dead-ends or hits its
/// step cap without confirming a bridge immunizes the node it stopped on.
std::vector<NodeId> cbf(const Graph& g, double coverage, std::uint64_t seed);

/// Bridge-Hub Detector random walks; each hit yields the bridge and one
/// bridge hub beyond it. Same fallback as cbf.
std::vector<NodeId> bhd(const Graph& g, double coverage, std::uint64_t seed);

struct WalkLimits {
    /// Per-walk step cap, in multiples of N.
    std::size_t steps_per_node = 100;
    /// Walks allowed per requested target before giving up.
    std::size_t walks_per_target = 1000;
};

std::vector<NodeId> cbf(const Graph& g, double coverage, std::uint64_t seed, WalkLimits limits);
std::vector<NodeId> bhd(const Graph& g, double coverage, std::uint64_t seed, WalkLimits limits);

}  // namespace commimmune
