#include "commimmune/lfr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "commimmune/community.hpp"
#include "commimmune/error.hpp"

namespace commimmune {

PowerLawSampler::PowerLawSampler(double exponent, double lower, std::size_t upper) {
    if (!(exponent > 1.0)) throw std::invalid_argument("power-law exponent must exceed 1");
    if (!(lower >= 1.0) || lower > static_cast<double>(upper)) {
        throw std::invalid_argument("power-law bounds must satisfy 1 <= lower <= upper");
    }
    first_ = static_cast<std::size_t>(std::floor(lower));
    const double partial = 1.0 - (lower - static_cast<double>(first_));
    cumulative_.reserve(upper - first_ + 1);
    double total = 0.0;
    double moment = 0.0;
    for (std::size_t k = first_; k <= upper; ++k) {
        double w = std::pow(static_cast<double>(k), -exponent);
        if (k == first_) w *= partial;
        total += w;
        moment += w * static_cast<double>(k);
        cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
    cumulative_.back() = 1.0;
    mean_ = moment / total;
}

std::size_t PowerLawSampler::sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return first_ + static_cast<std::size_t>(it - cumulative_.begin());
}

std::vector<std::size_t> sample_truncated_power_law(double exponent, std::size_t min, std::size_t max,
                                                    std::size_t count, Rng& rng) {
    if (min > max || min == 0) throw std::invalid_argument("power-law range must satisfy 1 <= min <= max");
    const PowerLawSampler sampler(exponent, static_cast<double>(min), max);
    std::vector<std::size_t> out(count);
    for (auto& x : out) x = sampler.sample(rng);
    return out;
}

double power_law_cutoff_for_mean(double exponent, std::size_t upper, double target_mean) {
    double lo = 1.0;
    double hi = static_cast<double>(upper);
    if (PowerLawSampler(exponent, lo, upper).mean() > target_mean ||
        PowerLawSampler(exponent, hi, upper).mean() < target_mean) {
        throw FeasibilityError("average degree " + std::to_string(target_mean) +
                               " is unreachable with maximum degree " + std::to_string(upper));
    }
    for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (PowerLawSampler(exponent, mid, upper).mean() < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void LfrParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("lfr: " + what); };
    if (n < 2) fail("n must be at least 2");
    if (!(mu >= 0.0 && mu < 1.0)) fail("mu must lie in [0, 1), got " + std::to_string(mu));
    if (!(degree_exponent >= 2.0)) fail("degree exponent must be at least 2");
    if (!(community_exponent > 1.0)) fail("community-size exponent must exceed 1");
    if (!(avg_degree >= 1.0 && avg_degree < static_cast<double>(max_degree))) {
        fail("average degree must be at least 1 and below the maximum degree");
    }
    if (max_degree >= n) fail("maximum degree must be below n");
    if (min_community == 0 || min_community > max_community) fail("community size range must satisfy 1 <= min <= max");
}

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Configuration-model pairing of a stub pool, followed by random double
// edge swaps that repair self-loops, repeated edges and pairs rejected by
// `allowed`. Unrepairable edges are dropped. Accepted edges land in `keys`
// so later pools avoid them too.
template <typename Allowed>
void wire_stubs(std::vector<NodeId>& stubs, Allowed allowed, Rng& rng,
                std::unordered_map<std::uint64_t, int>& keys,
                std::vector<std::pair<NodeId, NodeId>>& out) {
    if (stubs.size() < 2) return;
    rng.shuffle(std::span<NodeId>(stubs));
    const std::size_t m = stubs.size() / 2;
    std::vector<std::pair<NodeId, NodeId>> edges(m);
    for (std::size_t e = 0; e < m; ++e) edges[e] = {stubs[2 * e], stubs[2 * e + 1]};

    std::unordered_map<std::uint64_t, int> local;
    auto count = [&](NodeId a, NodeId b) {
        const auto key = edge_key(a, b);
        int c = 0;
        if (auto it = keys.find(key); it != keys.end()) c += it->second;
        if (auto it = local.find(key); it != local.end()) c += it->second;
        return c;
    };
    for (auto [a, b] : edges) ++local[edge_key(a, b)];
    auto valid = [&](NodeId a, NodeId b) { return a != b && allowed(a, b) && count(a, b) == 1; };

    std::vector<std::size_t> bad;
    for (std::size_t e = 0; e < m; ++e) {
        if (!valid(edges[e].first, edges[e].second)) bad.push_back(e);
    }
    constexpr int kTries = 200;
    std::vector<char> dropped(m, 0);
    for (std::size_t e : bad) {
        auto [a, b] = edges[e];
        if (valid(a, b)) continue;
        bool fixed = false;
        for (int t = 0; t < kTries && m > 1 && !fixed; ++t) {
            const std::size_t f = rng.index(m);
            if (f == e || dropped[f]) continue;
            auto [c, d] = edges[f];
            if (rng.bernoulli(0.5)) std::swap(c, d);
            // Proposed replacements: (a, c) and (b, d).
            if (a == c || b == d || !allowed(a, c) || !allowed(b, d)) continue;
            if (edge_key(a, c) == edge_key(b, d)) continue;
            if (count(a, c) > 0 || count(b, d) > 0) continue;
            --local[edge_key(a, b)];
            --local[edge_key(edges[f].first, edges[f].second)];
            ++local[edge_key(a, c)];
            ++local[edge_key(b, d)];
            edges[e] = {a, c};
            edges[f] = {b, d};
            fixed = true;
        }
        if (!fixed) {
            --local[edge_key(a, b)];
            dropped[e] = 1;
        }
    }
    for (std::size_t e = 0; e < m; ++e) {
        if (dropped[e]) continue;
        auto [a, b] = edges[e];
        if (a == b || !allowed(a, b)) continue;
        auto& k = keys[edge_key(a, b)];
        if (k > 0) continue;
        k = 1;
        out.emplace_back(a, b);
    }
}

// Community sizes in [min, max] summing to exactly n.
std::vector<std::size_t> community_sizes(const LfrParams& p, Rng& rng) {
    const PowerLawSampler sampler(p.community_exponent, static_cast<double>(p.min_community), p.max_community);
    std::vector<std::size_t> sizes;
    std::size_t sum = 0;
    while (sum < p.n) {
        sizes.push_back(sampler.sample(rng));
        sum += sizes.back();
    }
    const std::size_t excess = sum - p.n;
    if (sizes.back() >= p.min_community + excess) {
        sizes.back() -= excess;
        return sizes;
    }
    sum -= sizes.back();
    sizes.pop_back();
    std::size_t deficit = p.n - sum;
    for (std::size_t c = 0; deficit > 0; c = (c + 1) % sizes.size()) {
        bool room = false;
        for (auto s : sizes) room |= s < p.max_community;
        if (sizes.empty() || !room) {
            throw FeasibilityError("lfr: community size range cannot partition " + std::to_string(p.n) + " nodes");
        }
        if (sizes[c] < p.max_community) {
            ++sizes[c];
            --deficit;
        }
    }
    return sizes;
}

struct Attempt {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::uint32_t> membership;
};

std::optional<Attempt> try_generate(const LfrParams& p, double degree_cutoff, Rng& rng) {
    const std::size_t n = p.n;
    const PowerLawSampler degree_law(p.degree_exponent, degree_cutoff, p.max_degree);
    std::vector<std::size_t> degree(n);
    std::size_t total = 0;
    for (auto& k : degree) {
        k = degree_law.sample(rng);
        total += k;
    }
    if (total % 2 == 1) {
        auto& k = degree[rng.index(n)];
        k = k < p.max_degree ? k + 1 : k - 1;
    }

    // Internal degree: (1 - mu) k rounded stochastically, so the expected
    // external share is exactly mu.
    std::vector<std::size_t> internal(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double target = (1.0 - p.mu) * static_cast<double>(degree[i]);
        const double base = std::floor(target);
        internal[i] = static_cast<std::size_t>(base) + (rng.bernoulli(target - base) ? 1 : 0);
    }

    const auto sizes = community_sizes(p, rng);
    std::vector<std::size_t> free(sizes.begin(), sizes.end());
    std::vector<std::uint32_t> membership(n);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return internal[a] > internal[b]; });
    std::vector<std::size_t> eligible;
    for (NodeId v : order) {
        eligible.clear();
        std::size_t slots = 0;
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (free[c] > 0 && sizes[c] > internal[v]) {
                eligible.push_back(c);
                slots += free[c];
            }
        }
        if (eligible.empty()) return std::nullopt;
        // Weighted by free slots so communities fill evenly.
        std::size_t pick = rng.index(slots);
        std::size_t chosen = eligible.back();
        for (std::size_t c : eligible) {
            if (pick < free[c]) {
                chosen = c;
                break;
            }
            pick -= free[c];
        }
        membership[v] = static_cast<std::uint32_t>(chosen);
        --free[chosen];
    }

    // Each community needs an even internal stub count. Moving one stub
    // between internal and external flips it; the global degree sum is
    // even, so the external pool ends up even as well.
    std::vector<std::vector<NodeId>> members(sizes.size());
    for (NodeId v = 0; v < n; ++v) members[membership[v]].push_back(v);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        std::size_t sum = 0;
        for (NodeId v : members[c]) sum += internal[v];
        if (sum % 2 == 0) continue;
        bool fixed = false;
        if (p.mu == 0.0) {
            // No external pool to trade with: change one member's degree.
            for (std::size_t t = 0; t < members[c].size() && !fixed; ++t) {
                const NodeId v = members[c][rng.index(members[c].size())];
                if (degree[v] > 1) {
                    --degree[v];
                    --internal[v];
                    fixed = true;
                } else if (degree[v] < p.max_degree && internal[v] + 1 < sizes[c]) {
                    ++degree[v];
                    ++internal[v];
                    fixed = true;
                }
            }
            if (!fixed) return std::nullopt;
            continue;
        }
        for (std::size_t t = 0; t < members[c].size() && !fixed; ++t) {
            const NodeId v = members[c][rng.index(members[c].size())];
            if (internal[v] < degree[v] && internal[v] + 1 < sizes[c]) {
                ++internal[v];
                fixed = true;
            } else if (internal[v] > 0) {
                --internal[v];
                fixed = true;
            }
        }
        if (!fixed) {
            for (NodeId v : members[c]) {
                if (internal[v] > 0) {
                    --internal[v];
                    fixed = true;
                    break;
                }
            }
        }
        if (!fixed) return std::nullopt;
    }

    Attempt out;
    std::unordered_map<std::uint64_t, int> keys;
    keys.reserve(total);
    std::vector<NodeId> stubs;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        stubs.clear();
        for (NodeId v : members[c]) stubs.insert(stubs.end(), internal[v], v);
        wire_stubs(stubs, [](NodeId, NodeId) { return true; }, rng, keys, out.edges);
    }
    stubs.clear();
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), degree[v] - internal[v], v);
    wire_stubs(stubs, [&](NodeId a, NodeId b) { return membership[a] != membership[b]; }, rng, keys, out.edges);
    out.membership = std::move(membership);
    return out;
}

}  // namespace

LfrGraph generate(const LfrParams& params) {
    params.validate();
    const auto worst_internal = static_cast<std::size_t>(
        std::ceil((1.0 - params.mu) * static_cast<double>(params.max_degree)));
    if (params.max_community < worst_internal + 1) {
        throw FeasibilityError("lfr: largest community (" + std::to_string(params.max_community) +
                               ") cannot hold a node of internal degree " + std::to_string(worst_internal));
    }
    if (params.min_community > params.n) {
        throw FeasibilityError("lfr: minimum community size exceeds n");
    }
    const double cutoff = power_law_cutoff_for_mean(params.degree_exponent, params.max_degree, params.avg_degree);

    constexpr std::size_t kAttempts = 10;
    constexpr double kMixingTolerance = 0.05;
    Rng rng(params.seed);
    double last_mixing = -1.0;
    for (std::size_t attempt = 1; attempt <= kAttempts; ++attempt) {
        auto result = try_generate(params, cutoff, rng);
        if (!result) continue;
        LfrGraph out;
        out.graph = Graph::from_edges(params.n, result->edges);
        out.communities = Partition(result->membership);
        out.mixing = out.graph.edge_count() > 0 ? estimate_mixing(out.graph, out.communities) : 0.0;
        out.attempts = attempt;
        last_mixing = out.mixing;
        if (std::abs(out.mixing - params.mu) <= kMixingTolerance) return out;
    }
    throw FeasibilityError("lfr: no graph within mixing tolerance after " + std::to_string(kAttempts) +
                           " attempts (last mixing " + std::to_string(last_mixing) + ")");
}

}  // namespace commimmune
