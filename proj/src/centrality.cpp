#include "commimmune/centrality.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "commimmune/community.hpp"
#include "commimmune/random.hpp"

namespace commimmune {

Ranking rank(const ScoreMap& scores, TieRule tie_rule, std::uint64_t tie_seed) {
    const std::size_t n = scores.scores.size();
    // Secondary key: the node index itself, or a seeded permutation of it.
    std::vector<std::uint32_t> tie_key(n);
    std::iota(tie_key.begin(), tie_key.end(), 0U);
    if (tie_rule == TieRule::SeededShuffle) {
        Rng rng(tie_seed);
        rng.shuffle(std::span<std::uint32_t>(tie_key));
    }
    Ranking r;
    r.tie_rule = tie_rule;
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), 0U);
    const auto& s = scores.scores;
    std::sort(r.order.begin(), r.order.end(), [&](NodeId a, NodeId b) {
        if (s[a] != s[b]) return s[a] > s[b];
        return tie_key[a] < tie_key[b];
    });
    return r;
}

namespace {

// Foreign-community count for node i, using `seen` as a scratch stamp
// array indexed by community.
std::uint32_t count_foreign(const Graph& g, const std::vector<CommunityId>& assign, NodeId i,
                            std::vector<NodeId>& seen) {
    std::uint32_t count = 0;
    const NodeId stamp = i + 1;
    for (NodeId j : g.neighbors(i)) {
        const CommunityId c = assign[j];
        if (c != assign[i] && seen[c] != stamp) {
            seen[c] = stamp;
            ++count;
        }
    }
    return count;
}

std::vector<std::uint32_t> nnc_all(const Graph& g, const Partition& p) {
    p.check_covers(g);
    std::vector<NodeId> seen(p.community_count(), 0);
    std::vector<std::uint32_t> out(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) out[i] = count_foreign(g, p.assignment(), i, seen);
    return out;
}

std::vector<double> densities(const Graph& g, const Partition& p) {
    std::vector<double> rho(p.community_count());
    for (const auto& s : community_stats(g, p)) rho[s.community] = s.interconnection_density;
    return rho;
}

double hub_term(const Partition& p, NodeId i, std::uint32_t intra) {
    return static_cast<double>(p.size_of(p.community_of(i))) * intra;
}

}  // namespace

std::size_t neighboring_communities(const Graph& g, const Partition& p, NodeId i) {
    p.check_covers(g);
    std::vector<NodeId> seen(p.community_count(), 0);
    return count_foreign(g, p.assignment(), i, seen);
}

double community_hub_bridge(const Graph& g, const Partition& p, NodeId i) {
    const auto intra = static_cast<std::uint32_t>(intra_degree(g, p, i));
    const auto inter = g.degree(i) - intra;
    return hub_term(p, i, intra) + static_cast<double>(neighboring_communities(g, p, i) * inter);
}

double weighted_community_hub_bridge(const Graph& g, const Partition& p, NodeId i) {
    const auto intra = static_cast<std::uint32_t>(intra_degree(g, p, i));
    const auto inter = g.degree(i) - intra;
    const double rho = interconnection_density(g, p, p.community_of(i));
    const double bridge = static_cast<double>(neighboring_communities(g, p, i) * inter);
    return rho * hub_term(p, i, intra) + (1.0 - rho) * bridge;
}

double comm_measure(const Graph& g, const Partition& p, NodeId i) {
    const auto intra = intra_degree(g, p, i);
    const auto inter = g.degree(i) - intra;
    return static_cast<double>(intra + inter * inter);
}

ScoreMap neighboring_communities_scores(const Graph& g, const Partition& p) {
    const auto nnc = nnc_all(g, p);
    return {"nnc", std::vector<double>(nnc.begin(), nnc.end())};
}

ScoreMap community_hub_bridge_scores(const Graph& g, const Partition& p) {
    const auto nnc = nnc_all(g, p);
    const DegreeSplit split = split_degrees(g, p);
    ScoreMap out{"chb", std::vector<double>(g.node_count())};
    for (NodeId i = 0; i < g.node_count(); ++i) {
        out.scores[i] = hub_term(p, i, split.intra[i]) + static_cast<double>(nnc[i]) * split.inter[i];
    }
    return out;
}

ScoreMap weighted_community_hub_bridge_scores(const Graph& g, const Partition& p) {
    const auto nnc = nnc_all(g, p);
    const DegreeSplit split = split_degrees(g, p);
    const auto rho = densities(g, p);
    ScoreMap out{"wchb", std::vector<double>(g.node_count())};
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const double r = rho[p.community_of(i)];
        const double bridge = static_cast<double>(nnc[i]) * split.inter[i];
        out.scores[i] = r * hub_term(p, i, split.intra[i]) + (1.0 - r) * bridge;
    }
    return out;
}

ScoreMap comm_scores(const Graph& g, const Partition& p) {
    const DegreeSplit split = split_degrees(g, p);
    ScoreMap out{"comm", std::vector<double>(g.node_count())};
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const double inter = split.inter[i];
        out.scores[i] = split.intra[i] + inter * inter;
    }
    return out;
}

ScoreMap degree_centrality(const Graph& g) {
    ScoreMap out{"degree", std::vector<double>(g.node_count())};
    for (NodeId i = 0; i < g.node_count(); ++i) out.scores[i] = static_cast<double>(g.degree(i));
    return out;
}

namespace {

// Brandes dependency accumulation from one source, added into `acc`.
class BrandesWorker {
public:
    explicit BrandesWorker(const Graph& g)
        : g_(g), sigma_(g.node_count()), dist_(g.node_count()), delta_(g.node_count()) {
        order_.reserve(g.node_count());
    }

    void accumulate(NodeId source, std::vector<double>& acc) {
        std::fill(sigma_.begin(), sigma_.end(), 0.0);
        std::fill(dist_.begin(), dist_.end(), -1);
        std::fill(delta_.begin(), delta_.end(), 0.0);
        order_.clear();
        sigma_[source] = 1.0;
        dist_[source] = 0;
        order_.push_back(source);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeId v = order_[head];
            for (NodeId w : g_.neighbors(v)) {
                if (dist_[w] < 0) {
                    dist_[w] = dist_[v] + 1;
                    order_.push_back(w);
                }
                if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
            }
        }
        for (std::size_t k = order_.size(); k-- > 1;) {
            const NodeId w = order_[k];
            for (NodeId v : g_.neighbors(w)) {
                if (dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
            }
            acc[w] += delta_[w];
        }
    }

private:
    const Graph& g_;
    std::vector<double> sigma_;
    std::vector<int> dist_;
    std::vector<double> delta_;
    std::vector<NodeId> order_;
};

}  // namespace

ScoreMap betweenness_centrality(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kBlock = 64;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    const std::size_t width = std::max<std::size_t>(1, std::min<std::size_t>(threads, blocks));

    // Blocks are computed `width` at a time and folded in block order.
    std::vector<std::vector<double>> partial(width, std::vector<double>(n, 0.0));
    std::vector<BrandesWorker> workers(width, BrandesWorker(g));
    ScoreMap out{"betweenness", std::vector<double>(n, 0.0)};
    for (std::size_t wave = 0; wave < blocks; wave += width) {
        auto run_block = [&](std::size_t slot) {
            const std::size_t b = wave + slot;
            auto& acc = partial[slot];
            std::fill(acc.begin(), acc.end(), 0.0);
            if (b >= blocks) return;
            const std::size_t end = std::min(n, (b + 1) * kBlock);
            for (std::size_t s = b * kBlock; s < end; ++s) workers[slot].accumulate(static_cast<NodeId>(s), acc);
        };
        if (width == 1) {
            run_block(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t slot = 0; slot < width; ++slot) pool.emplace_back(run_block, slot);
        }
        for (const auto& acc : partial) {
            for (std::size_t i = 0; i < n; ++i) out.scores[i] += acc[i];
        }
    }
    // Each unordered pair was counted from both endpoints.
    for (double& v : out.scores) v /= 2.0;
    return out;
}

}  // namespace commimmune
