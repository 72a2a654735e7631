#include "commimmune/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "commimmune/error.hpp"
#include "commimmune/random.hpp"

namespace commimmune {

std::size_t coverage_count(double coverage, std::size_t node_count) {
    if (!(coverage > 0.0 && coverage <= 1.0)) {
        throw std::invalid_argument("coverage must lie in (0, 1], got " + std::to_string(coverage));
    }
    const double exact = coverage * static_cast<double>(node_count);
    const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    return std::min(std::max<std::size_t>(count, 1), node_count);
}

namespace {

void require_edges(const Graph& g) {
    if (g.edge_count() == 0) throw DataError("random-walk strategies need at least one edge");
}

// Distinct target collection in selection order.
class TargetSet {
public:
    TargetSet(std::size_t node_count, std::size_t wanted) : chosen_(node_count, 0), wanted_(wanted) {
        order_.reserve(wanted);
    }
    bool add(NodeId v) {
        if (full() || chosen_[v]) return false;
        chosen_[v] = 1;
        order_.push_back(v);
        return true;
    }
    bool full() const { return order_.size() >= wanted_; }
    std::vector<NodeId> take() { return std::move(order_); }

private:
    std::vector<char> chosen_;
    std::size_t wanted_;
    std::vector<NodeId> order_;
};

// Membership flags that reset in O(1) by bumping a generation counter.
class StampSet {
public:
    explicit StampSet(std::size_t n) : stamp_(n, 0) {}
    void clear() { ++generation_; }
    void insert(NodeId v) { stamp_[v] = generation_; }
    bool contains(NodeId v) const { return stamp_[v] == generation_; }

private:
    std::vector<std::uint64_t> stamp_;
    std::uint64_t generation_ = 1;
};

FeasibilityError budget_error(const char* strategy, std::size_t walks, std::size_t got, std::size_t wanted) {
    return FeasibilityError(std::string(strategy) + ": walk budget of " + std::to_string(walks) +
                            " walks exhausted with " + std::to_string(got) + " of " +
                            std::to_string(wanted) + " targets found");
}

// Random unvisited neighbor of v, if any.
std::optional<NodeId> step_unvisited(const Graph& g, NodeId v, const StampSet& visited, Rng& rng,
                                     std::vector<NodeId>& scratch) {
    scratch.clear();
    for (NodeId u : g.neighbors(v)) {
        if (!visited.contains(u)) scratch.push_back(u);
    }
    if (scratch.empty()) return std::nullopt;
    return scratch[rng.index(scratch.size())];
}

}  // namespace

std::vector<NodeId> acquaintance(const Graph& g, double coverage, std::uint64_t seed) {
    require_edges(g);
    const std::size_t n = g.node_count();
    const std::size_t wanted = coverage_count(coverage, n);
    std::size_t reachable = 0;
    for (NodeId v = 0; v < n; ++v) reachable += g.degree(v) > 0 ? 1 : 0;
    if (wanted > reachable) {
        throw FeasibilityError("acquaintance: " + std::to_string(wanted) + " targets requested but only " +
                               std::to_string(reachable) + " nodes have a neighbor");
    }
    Rng rng(seed);
    TargetSet targets(n, wanted);
    const std::size_t budget = WalkLimits{}.walks_per_target * wanted;
    for (std::size_t draw = 0; !targets.full(); ++draw) {
        if (draw >= budget) throw budget_error("acquaintance", budget, targets.take().size(), wanted);
        const auto start = static_cast<NodeId>(rng.index(n));
        const auto adj = g.neighbors(start);
        if (adj.empty()) continue;
        targets.add(adj[rng.index(adj.size())]);
    }
    return targets.take();
}

std::vector<NodeId> cbf(const Graph& g, double coverage, std::uint64_t seed) {
    return cbf(g, coverage, seed, WalkLimits{});
}

std::vector<NodeId> bhd(const Graph& g, double coverage, std::uint64_t seed) {
    return bhd(g, coverage, seed, WalkLimits{});
}

std::vector<NodeId> cbf(const Graph& g, double coverage, std::uint64_t seed, WalkLimits limits) {
    require_edges(g);
    const std::size_t n = g.node_count();
    const std::size_t wanted = coverage_count(coverage, n);
    const std::size_t walk_budget = limits.walks_per_target * wanted;
    const std::size_t step_cap = limits.steps_per_node * n;
    Rng rng(seed);
    TargetSet targets(n, wanted);
    StampSet visited(n);
    std::vector<NodeId> history;
    std::vector<NodeId> scratch;

    // Edges from u into the visited set, not counting `skip`.
    auto links_back = [&](NodeId u, NodeId skip) {
        std::size_t count = 0;
        for (NodeId w : g.neighbors(u)) count += (w != skip && visited.contains(w)) ? 1 : 0;
        return count;
    };

    for (std::size_t walk = 0; !targets.full(); ++walk) {
        if (walk >= walk_budget) throw budget_error("cbf", walk_budget, targets.take().size(), wanted);
        visited.clear();
        history.clear();
        NodeId current = static_cast<NodeId>(rng.index(n));
        visited.insert(current);
        history.push_back(current);
        bool confirmed = false;

        for (std::size_t step = 0; step < step_cap; ++step) {
            const auto next = step_unvisited(g, current, visited, rng, scratch);
            if (!next) break;
            const NodeId prev = current;
            const NodeId v = *next;
            // v's links into {v_0..v_{i-1}}, the arrival edge included.
            const std::size_t back = links_back(v, v);
            visited.insert(v);
            history.push_back(v);
            current = v;
            if (history.size() < 3 || back > 1) continue;

            // prev is a potential bridge. Probe up to two other neighbors
            // of v for links back to nodes visited before v.
            scratch.clear();
            for (NodeId u : g.neighbors(v)) {
                if (u != prev) scratch.push_back(u);
            }
            if (scratch.empty()) {
                current = prev;
                continue;
            }
            const std::size_t probes = std::min<std::size_t>(2, scratch.size());
            bool isolated = true;
            for (std::size_t k = 0; k < probes; ++k) {
                std::swap(scratch[k], scratch[k + rng.index(scratch.size() - k)]);
                const NodeId u = scratch[k];
                if ((u != v && visited.contains(u)) || links_back(u, v) > 0) isolated = false;
            }
            if (isolated) {
                targets.add(prev);
                confirmed = true;
                break;
            }
            current = prev;
        }
        if (!confirmed) targets.add(current);
    }
    return targets.take();
}

std::vector<NodeId> bhd(const Graph& g, double coverage, std::uint64_t seed, WalkLimits limits) {
    require_edges(g);
    const std::size_t n = g.node_count();
    const std::size_t wanted = coverage_count(coverage, n);
    const std::size_t walk_budget = limits.walks_per_target * wanted;
    const std::size_t step_cap = limits.steps_per_node * n;
    Rng rng(seed);
    TargetSet targets(n, wanted);
    StampSet visited(n);
    StampSet friends(n);  // F: union of the visited nodes' neighborhoods
    std::vector<NodeId> scratch;
    std::vector<NodeId> hubs;

    for (std::size_t walk = 0; !targets.full(); ++walk) {
        if (walk >= walk_budget) throw budget_error("bhd", walk_budget, targets.take().size(), wanted);
        visited.clear();
        friends.clear();
        NodeId current = static_cast<NodeId>(rng.index(n));
        visited.insert(current);
        for (NodeId u : g.neighbors(current)) friends.insert(u);
        bool hit = false;

        for (std::size_t step = 0; step < step_cap; ++step) {
            const auto next = step_unvisited(g, current, visited, rng, scratch);
            if (!next) break;
            current = *next;
            visited.insert(current);

            // Neighbors of v_i outside F and without links into F (the
            // edge back to v_i itself does not count).
            hubs.clear();
            for (NodeId u : g.neighbors(current)) {
                if (friends.contains(u) || visited.contains(u)) continue;
                bool linked = false;
                for (NodeId w : g.neighbors(u)) {
                    if (w != current && friends.contains(w)) {
                        linked = true;
                        break;
                    }
                }
                if (!linked) hubs.push_back(u);
            }
            if (!hubs.empty()) {
                targets.add(current);
                targets.add(hubs[rng.index(hubs.size())]);
                hit = true;
                break;
            }
            for (NodeId u : g.neighbors(current)) friends.insert(u);
        }
        if (!hit) targets.add(current);
    }
    return targets.take();
}

}  // namespace commimmune
