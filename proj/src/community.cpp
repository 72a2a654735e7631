#include "commimmune/community.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "commimmune/error.hpp"
#include "commimmune/random.hpp"

namespace commimmune {

double modularity(const Graph& g, const Partition& p) {
    p.check_covers(g);
    const auto edges = static_cast<double>(g.edge_count());
    if (g.edge_count() == 0) throw DataError("modularity is undefined on a graph without edges");
    std::vector<double> internal(p.community_count(), 0.0);
    std::vector<double> degree_sum(p.community_count(), 0.0);
    const auto& assign = p.assignment();
    for (NodeId i = 0; i < g.node_count(); ++i) {
        degree_sum[assign[i]] += static_cast<double>(g.degree(i));
        for (NodeId j : g.neighbors(i)) {
            if (i < j && assign[i] == assign[j]) internal[assign[i]] += 1.0;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < p.community_count(); ++c) {
        const double share = degree_sum[c] / (2.0 * edges);
        q += internal[c] / edges - share * share;
    }
    return q;
}

namespace {

// Weighted graph used across Louvain levels. Self weight holds the weight
// of edges folded inside an aggregated node (each edge counted once).
struct LevelGraph {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> targets;
    std::vector<double> weights;
    std::vector<double> self_weight;
    double total_weight = 0.0;  // m

    std::size_t size() const { return self_weight.size(); }

    double strength(std::uint32_t i) const {
        double s = 2.0 * self_weight[i];
        for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) s += weights[e];
        return s;
    }
};

LevelGraph level_from_graph(const Graph& g) {
    LevelGraph lg;
    lg.offsets.assign(g.node_count() + 1, 0);
    for (NodeId i = 0; i < g.node_count(); ++i) lg.offsets[i + 1] = lg.offsets[i] + g.degree(i);
    lg.targets.reserve(lg.offsets.back());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        for (NodeId j : g.neighbors(i)) lg.targets.push_back(j);
    }
    lg.weights.assign(lg.targets.size(), 1.0);
    lg.self_weight.assign(g.node_count(), 0.0);
    lg.total_weight = static_cast<double>(g.edge_count());
    return lg;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm,
                     std::size_t community_count) {
    LevelGraph out;
    out.self_weight.assign(community_count, 0.0);
    out.total_weight = lg.total_weight;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(community_count);
    for (std::uint32_t i = 0; i < lg.size(); ++i) {
        out.self_weight[comm[i]] += lg.self_weight[i];
        for (std::size_t e = lg.offsets[i]; e < lg.offsets[i + 1]; ++e) {
            const std::uint32_t j = lg.targets[e];
            if (comm[i] == comm[j]) {
                if (i < j) out.self_weight[comm[i]] += lg.weights[e];
            } else {
                adj[comm[i]].emplace_back(comm[j], lg.weights[e]);
            }
        }
    }
    out.offsets.assign(community_count + 1, 0);
    for (std::uint32_t c = 0; c < community_count; ++c) {
        auto& list = adj[c];
        std::sort(list.begin(), list.end());
        std::size_t merged = 0;
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (merged > 0 && list[merged - 1].first == list[k].first) {
                list[merged - 1].second += list[k].second;
            } else {
                list[merged++] = list[k];
            }
        }
        list.resize(merged);
        out.offsets[c + 1] = out.offsets[c] + merged;
        for (auto [t, w] : list) {
            out.targets.push_back(t);
            out.weights.push_back(w);
        }
    }
    return out;
}

class LocalMover {
public:
    explicit LocalMover(const LevelGraph& lg) : lg_(lg) {
        const std::size_t n = lg.size();
        comm_.resize(n);
        std::iota(comm_.begin(), comm_.end(), 0U);
        strength_.resize(n);
        total_.resize(n);
        internal_.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            strength_[i] = lg.strength(i);
            total_[i] = strength_[i];
            internal_[i] = lg.self_weight[i];
        }
        link_weight_.assign(n, 0.0);
        touched_flag_.assign(n, 0);
    }

    double modularity() const {
        const double m = lg_.total_weight;
        double q = 0.0;
        for (std::size_t c = 0; c < comm_.size(); ++c) {
            if (total_[c] == 0.0 && internal_[c] == 0.0) continue;
            const double share = total_[c] / (2.0 * m);
            q += internal_[c] / m - share * share;
        }
        return q;
    }

    /// Runs sweeps until one gains less than `threshold`. Returns whether
    /// any node changed community.
    bool run(std::span<const std::uint32_t> order, double threshold) {
        bool moved_any = false;
        double q = modularity();
        while (true) {
            bool moved = false;
            for (std::uint32_t i : order) moved |= move_node(i);
            const double next = modularity();
            moved_any |= moved;
            const double gain = next - q;
            q = next;
            if (!moved || gain < threshold) break;
        }
        return moved_any;
    }

    const std::vector<std::uint32_t>& communities() const { return comm_; }

private:
    bool move_node(std::uint32_t i) {
        const double m = lg_.total_weight;
        const double k = strength_[i];
        touched_.clear();
        const std::uint32_t old_comm = comm_[i];
        touch(old_comm);
        for (std::size_t e = lg_.offsets[i]; e < lg_.offsets[i + 1]; ++e) {
            const std::uint32_t c = comm_[lg_.targets[e]];
            touch(c);
            link_weight_[c] += lg_.weights[e];
        }

        total_[old_comm] -= k;
        internal_[old_comm] -= link_weight_[old_comm] + lg_.self_weight[i];

        auto gain = [&](std::uint32_t c) { return link_weight_[c] / m - total_[c] * k / (2.0 * m * m); };
        const double stay_gain = gain(old_comm);
        std::uint32_t best = old_comm;
        double best_gain = stay_gain;
        for (std::uint32_t c : touched_) {
            if (c == old_comm) continue;
            const double g = gain(c);
            // Moving requires a strict improvement over staying; among
            // movers the lowest community id wins ties.
            if (g > stay_gain + 1e-15 &&
                (best == old_comm || g > best_gain || (g == best_gain && c < best))) {
                best = c;
                best_gain = g;
            }
        }

        total_[best] += k;
        internal_[best] += link_weight_[best] + lg_.self_weight[i];
        comm_[i] = best;
        for (std::uint32_t c : touched_) {
            link_weight_[c] = 0.0;
            touched_flag_[c] = 0;
        }
        return best != old_comm;
    }

    void touch(std::uint32_t c) {
        if (!touched_flag_[c]) {
            touched_flag_[c] = 1;
            touched_.push_back(c);
        }
    }

    const LevelGraph& lg_;
    std::vector<std::uint32_t> comm_;
    std::vector<double> strength_;
    std::vector<double> total_;
    std::vector<double> internal_;
    std::vector<double> link_weight_;
    std::vector<char> touched_flag_;
    std::vector<std::uint32_t> touched_;
};

// Dense renumbering in order of first appearance.
std::size_t renumber(std::vector<std::uint32_t>& comm) {
    std::vector<std::uint32_t> remap(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

}  // namespace

LouvainResult run_louvain(const Graph& g, std::uint64_t seed) {
    if (g.node_count() == 0) throw DataError("louvain needs a non-empty graph");
    LouvainResult result;
    if (g.edge_count() == 0) {
        result.partition = Partition::singletons(g.node_count());
        return result;
    }

    constexpr double kSweepThreshold = 1e-9;
    Rng rng(seed);
    std::vector<std::uint32_t> node_comm(g.node_count());
    std::iota(node_comm.begin(), node_comm.end(), 0U);
    LevelGraph level = level_from_graph(g);

    double previous_q = LocalMover(level).modularity();
    while (true) {
        LocalMover mover(level);
        std::vector<std::uint32_t> order(level.size());
        std::iota(order.begin(), order.end(), 0U);
        rng.shuffle(std::span<std::uint32_t>(order));
        const bool moved = mover.run(order, kSweepThreshold);
        const double q = mover.modularity();
        if (!moved) {
            result.modularity = q;
            break;
        }
        if (q < previous_q - 1e-12) {
            throw std::logic_error("louvain level decreased modularity");
        }
        result.level_modularity.push_back(q);
        previous_q = q;

        std::vector<std::uint32_t> comm = mover.communities();
        const std::size_t count = renumber(comm);
        for (auto& c : node_comm) c = comm[c];
        const bool shrunk = count < level.size();
        level = aggregate(level, comm, count);
        result.modularity = q;
        if (!shrunk) break;
    }
    result.partition = Partition(node_comm);
    return result;
}

Partition louvain(const Graph& g, std::uint64_t seed) { return run_louvain(g, seed).partition; }

double estimate_mixing(const Graph& g, const Partition& p, MixingEstimator estimator) {
    const DegreeSplit split = split_degrees(g, p);
    if (estimator == MixingEstimator::EdgeFraction) {
        double inter = 0.0;
        double total = 0.0;
        for (NodeId i = 0; i < g.node_count(); ++i) {
            inter += split.inter[i];
            total += split.inter[i] + split.intra[i];
        }
        if (total == 0.0) throw DataError("mixing is undefined when every degree is zero");
        return inter / total;
    }
    double sum = 0.0;
    std::size_t counted = 0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const double k = split.inter[i] + split.intra[i];
        if (k == 0.0) continue;
        sum += split.inter[i] / k;
        ++counted;
    }
    if (counted == 0) throw DataError("mixing is undefined when every degree is zero");
    return sum / static_cast<double>(counted);
}

namespace {

double density_from_split(const Partition& p, const DegreeSplit& split, CommunityId k) {
    const auto members = p.members(k);
    if (members.empty()) throw DataError("empty community");
    double sum = 0.0;
    for (NodeId i : members) {
        const double total = split.inter[i] + split.intra[i];
        if (total > 0.0) sum += split.inter[i] / total;
    }
    return sum / static_cast<double>(members.size());
}

}  // namespace

double interconnection_density(const Graph& g, const Partition& p, CommunityId k) {
    return density_from_split(p, split_degrees(g, p), k);
}

std::vector<CommunityStats> community_stats(const Graph& g, const Partition& p) {
    const DegreeSplit split = split_degrees(g, p);
    std::vector<CommunityStats> stats(p.community_count());
    for (CommunityId c = 0; c < p.community_count(); ++c) {
        auto& s = stats[c];
        s.community = c;
        s.size = p.size_of(c);
        std::size_t intra_sum = 0;
        for (NodeId i : p.members(c)) intra_sum += split.intra[i];
        s.internal_edge_count = intra_sum / 2;
        s.interconnection_density = density_from_split(p, split, c);
    }
    return stats;
}

Partition load_partition(std::istream& in, const Graph& g) {
    constexpr std::uint32_t kUnset = UINT32_MAX;
    std::vector<std::uint32_t> assignment(g.node_count(), kUnset);
    std::unordered_map<std::string, std::uint32_t> community_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string node;
        std::string community;
        if (!(fields >> node) || node.front() == '#') continue;
        if (!(fields >> community)) throw ParseError("expected `node community`", line_no);
        const auto id = g.find(node);
        if (!id) throw ParseError("unknown node '" + node + "'", line_no);
        if (assignment[*id] != kUnset) throw ParseError("node '" + node + "' listed twice", line_no);
        auto [it, _] = community_ids.emplace(community, static_cast<std::uint32_t>(community_ids.size()));
        assignment[*id] = it->second;
    }
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (assignment[i] == kUnset) {
            throw DataError("partition is missing node '" + g.name(i) + "'");
        }
    }
    return Partition(assignment);
}

Partition load_partition_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open partition file '" + path + "'");
    return load_partition(in, g);
}

void save_partition(std::ostream& out, const Graph& g, const Partition& p) {
    p.check_covers(g);
    for (NodeId i = 0; i < g.node_count(); ++i) out << g.name(i) << ' ' << p.community_of(i) << '\n';
}

}  // namespace commimmune
