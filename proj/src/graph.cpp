#include "commimmune/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "commimmune/error.hpp"

namespace commimmune {

Graph Graph::from_edges(std::size_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges,
                        std::size_t* duplicates_dropped,
                        std::size_t* self_loops_dropped) {
    std::vector<std::pair<NodeId, NodeId>> canon;
    canon.reserve(edges.size());
    std::size_t loops = 0;
    for (auto [a, b] : edges) {
        if (a >= node_count || b >= node_count) {
            throw std::out_of_range("edge endpoint outside node range");
        }
        if (a == b) {
            ++loops;
            continue;
        }
        canon.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(canon.begin(), canon.end());
    auto last = std::unique(canon.begin(), canon.end());
    const std::size_t dups = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [a, b] : canon) {
        ++g.offsets_[a + 1];
        ++g.offsets_[b + 1];
    }
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(canon.size() * 2);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [a, b] : canon) {
        g.targets_[fill[a]++] = b;
        g.targets_[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }
    if (duplicates_dropped) *duplicates_dropped = dups;
    if (self_loops_dropped) *self_loops_dropped = loops;
    return g;
}

void Graph::check_node(NodeId i) const {
    if (i >= node_count()) {
        throw std::out_of_range("node " + std::to_string(i) + " out of range (N=" +
                                std::to_string(node_count()) + ")");
    }
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
    check_node(i);
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::size_t Graph::degree(NodeId i) const {
    check_node(i);
    return offsets_[i + 1] - offsets_[i];
}

bool Graph::has_edge(NodeId i, NodeId j) const {
    auto adj = neighbors(i);
    return std::binary_search(adj.begin(), adj.end(), j);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < node_count(); ++i) {
        for (NodeId j : neighbors(i)) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

const std::string& Graph::label(NodeId i) const {
    check_node(i);
    if (labels_.empty()) throw std::logic_error("graph has no label table");
    return labels_[i];
}

std::string Graph::name(NodeId i) const {
    return labels_.empty() ? std::to_string(i) : label(i);
}

std::optional<NodeId> Graph::find(std::string_view label) const {
    if (labels_.empty()) {
        NodeId value = 0;
        auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
        if (ec != std::errc{} || ptr != label.data() + label.size() || value >= node_count()) {
            return std::nullopt;
        }
        return value;
    }
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

void Graph::set_labels(std::vector<std::string> labels) {
    if (labels.size() != node_count()) {
        throw std::invalid_argument("label table size does not match node count");
    }
    std::unordered_map<std::string, NodeId> index;
    index.reserve(labels.size());
    for (NodeId i = 0; i < labels.size(); ++i) {
        if (!index.emplace(labels[i], i).second) {
            throw DataError("duplicate node label '" + labels[i] + "'");
        }
    }
    labels_ = std::move(labels);
    label_index_ = std::move(index);
}

EdgeListReport load_edge_list(std::istream& in) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::pair<NodeId, NodeId>> edges;
    auto intern = [&](const std::string& token) {
        auto [it, inserted] = index.emplace(token, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(token);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string a;
        std::string b;
        std::string extra;
        if (!(fields >> a) || a.front() == '#') continue;
        if (!(fields >> b)) throw ParseError("expected two node identifiers", line_no);
        if (fields >> extra) throw ParseError("unexpected third field '" + extra + "'", line_no);
        const NodeId u = intern(a);
        const NodeId v = intern(b);
        edges.emplace_back(u, v);
    }
    if (labels.empty()) throw DataError("edge list is empty");

    EdgeListReport report;
    report.graph = Graph::from_edges(labels.size(), edges, &report.duplicates_dropped,
                                     &report.self_loops_dropped);
    report.graph.set_labels(std::move(labels));
    return report;
}

EdgeListReport load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list '" + path + "'");
    return load_edge_list(in);
}

void save_edge_list(std::ostream& out, const Graph& g) {
    for (auto [a, b] : g.edges()) out << g.name(a) << ' ' << g.name(b) << '\n';
}

Partition::Partition(std::span<const std::uint32_t> assignment) {
    std::unordered_map<std::uint32_t, CommunityId> remap;
    assignment_.reserve(assignment.size());
    for (NodeId i = 0; i < assignment.size(); ++i) {
        auto [it, inserted] =
            remap.emplace(assignment[i], static_cast<CommunityId>(members_.size()));
        if (inserted) members_.emplace_back();
        assignment_.push_back(it->second);
        members_[it->second].push_back(i);
    }
}

Partition Partition::singletons(std::size_t node_count) {
    std::vector<std::uint32_t> a(node_count);
    for (std::uint32_t i = 0; i < node_count; ++i) a[i] = i;
    return Partition(a);
}

Partition Partition::single_community(std::size_t node_count) {
    return Partition(std::vector<std::uint32_t>(node_count, 0));
}

CommunityId Partition::community_of(NodeId i) const {
    if (i >= assignment_.size()) throw std::out_of_range("node outside partition");
    return assignment_[i];
}

std::span<const NodeId> Partition::members(CommunityId c) const {
    if (c >= members_.size()) throw std::out_of_range("community index out of range");
    return members_[c];
}

void Partition::check_covers(const Graph& g) const {
    if (node_count() != g.node_count()) {
        throw DataError("partition covers " + std::to_string(node_count()) +
                        " nodes but the graph has " + std::to_string(g.node_count()));
    }
}

std::size_t degree(const Graph& g, NodeId i) { return g.degree(i); }

std::size_t intra_degree(const Graph& g, const Partition& p, NodeId i) {
    p.check_covers(g);
    const CommunityId own = p.community_of(i);
    return static_cast<std::size_t>(std::count_if(g.neighbors(i).begin(), g.neighbors(i).end(),
                                                  [&](NodeId j) { return p.community_of(j) == own; }));
}

std::size_t inter_degree(const Graph& g, const Partition& p, NodeId i) {
    return g.degree(i) - intra_degree(g, p, i);
}

DegreeSplit split_degrees(const Graph& g, const Partition& p) {
    p.check_covers(g);
    DegreeSplit split;
    split.intra.assign(g.node_count(), 0);
    split.inter.assign(g.node_count(), 0);
    const auto& assign = p.assignment();
    for (NodeId i = 0; i < g.node_count(); ++i) {
        for (NodeId j : g.neighbors(i)) {
            if (assign[j] == assign[i]) {
                ++split.intra[i];
            } else {
                ++split.inter[i];
            }
        }
    }
    return split;
}

}  // namespace commimmune
