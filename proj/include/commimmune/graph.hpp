#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace commimmune {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

/// Immutable undirected simple graph in compressed adjacency form.
/// Neighbor lists are sorted; nodes are dense indices 0..N-1.
class Graph {
public:
    Graph() = default;

    /// Builds a simple graph on `node_count` nodes. Self-loops and repeated
    /// edges (in either orientation) are dropped; the counts land in the
    /// optional out-parameters.
    static Graph from_edges(std::size_t node_count,
                            std::span<const std::pair<NodeId, NodeId>> edges,
                            std::size_t* duplicates_dropped = nullptr,
                            std::size_t* self_loops_dropped = nullptr);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const;
    bool has_edge(NodeId i, NodeId j) const;

    /// Every edge once, with first < second, in ascending order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    /// Original identifiers, if the graph came from a file.
    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::string& label(NodeId i) const;
    /// Label of `i`, or its decimal index when the graph is unlabeled.
    std::string name(NodeId i) const;
    std::optional<NodeId> find(std::string_view label) const;

    void set_labels(std::vector<std::string> labels);

private:
    void check_node(NodeId i) const;

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> label_index_;
};

struct EdgeListReport {
    Graph graph;
    std::size_t duplicates_dropped = 0;
    std::size_t self_loops_dropped = 0;
};

/// Reads `a b` edge lines; `#` lines and blank lines are skipped. Labels
/// are mapped to indices in order of first appearance.
EdgeListReport load_edge_list(std::istream& in);
EdgeListReport load_edge_list_file(const std::string& path);

/// Writes one `label label` line per edge.
void save_edge_list(std::ostream& out, const Graph& g);

/// Non-overlapping assignment of nodes to communities. Community ids are
/// dense and canonical: numbered by first appearance in node order, so two
/// partitions describing the same grouping compare equal.
class Partition {
public:
    Partition() = default;

    /// Accepts any labelling (ids need not be dense) and canonicalizes it.
    explicit Partition(std::span<const std::uint32_t> assignment);
    explicit Partition(const std::vector<std::uint32_t>& assignment)
        : Partition(std::span<const std::uint32_t>(assignment)) {}

    static Partition singletons(std::size_t node_count);
    static Partition single_community(std::size_t node_count);

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t community_count() const noexcept { return members_.size(); }

    CommunityId community_of(NodeId i) const;
    std::span<const NodeId> members(CommunityId c) const;
    std::size_t size_of(CommunityId c) const { return members(c).size(); }
    const std::vector<CommunityId>& assignment() const noexcept { return assignment_; }

    /// Throws DataError unless the partition has exactly g.node_count() nodes.
    void check_covers(const Graph& g) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.assignment_ == b.assignment_;
    }

private:
    std::vector<CommunityId> assignment_;
    std::vector<std::vector<NodeId>> members_;
};

std::size_t degree(const Graph& g, NodeId i);
std::size_t intra_degree(const Graph& g, const Partition& p, NodeId i);
std::size_t inter_degree(const Graph& g, const Partition& p, NodeId i);

/// Per-node (intra, inter) degree split in one pass.
struct DegreeSplit {
    std::vector<std::uint32_t> intra;
    std::vector<std::uint32_t> inter;
};
DegreeSplit split_degrees(const Graph& g, const Partition& p);

}  // namespace commimmune
