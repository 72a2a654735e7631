#pragma once

// Shared fixtures and test-only oracles. The oracles deliberately work from
// an adjacency matrix and member lists, not from the library's CSR graph.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "commimmune/graph.hpp"

namespace fixtures {

using commimmune::Graph;
using commimmune::NodeId;
using commimmune::Partition;

inline Graph from_text(const std::string& text) {
    std::istringstream in(text);
    return commimmune::load_edge_list(in).graph;
}

// Triangles {a,b,c} and {d,e,f} joined by c-d.
inline Graph two_triangles() { return from_text("a b\nb c\na c\nc d\nd e\ne f\nd f\n"); }
inline Partition two_triangles_split() { return Partition(std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}); }

// Two 5-cliques {0..4} and {5..9} joined by 4-5.
inline Graph two_cliques() {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId base : {0U, 5U}) {
        for (NodeId i = 0; i < 5; ++i)
            for (NodeId j = i + 1; j < 5; ++j) e.emplace_back(base + i, base + j);
    }
    e.emplace_back(4, 5);
    return Graph::from_edges(10, e);
}

inline Graph clique(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Graph star(std::size_t leaves) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph::from_edges(leaves + 1, e);
}

// Hand reconstruction of the five-community toy network used to illustrate
// the measures (26 nodes). Built to satisfy the stated facts: n5 reaches
// three foreign communities; n5 and n10 share internal/external counts;
// n10 has three links into C1 and n12 one link into C3; n6 and n16 both
// have four internal links with n6 in the largest community; C1's bridges
// are n2, n4, n5; rho(C1) is about 0.15.
inline const char* toy_edges() {
    return "# C1 internal\n"
           "n6 n1\nn6 n3\nn6 n7\nn6 n5\nn5 n4\nn5 n7\nn5 n1\nn4 n3\nn4 n2\nn4 n7\nn2 n1\nn2 n3\n"
           "# C2 internal\n"
           "n10 n8\nn10 n9\nn10 n11\nn10 n12\nn8 n9\nn11 n12\n"
           "# C3 internal\n"
           "n13 n14\nn13 n15\nn14 n15\nn15 n22\nn14 n22\n"
           "# C4 internal\n"
           "n23 n24\nn23 n25\nn24 n25\nn25 n26\nn24 n26\n"
           "# C5 internal\n"
           "n16 n17\nn16 n18\nn16 n19\nn16 n20\nn17 n18\nn19 n20\nn20 n21\nn21 n17\n"
           "# bridges\n"
           "n5 n10\nn5 n14\nn5 n23\nn10 n2\nn10 n4\nn2 n24\nn12 n13\nn15 n17\n";
}

inline const char* toy_communities() {
    return "n1 C1\nn2 C1\nn3 C1\nn4 C1\nn5 C1\nn6 C1\nn7 C1\n"
           "n8 C2\nn9 C2\nn10 C2\nn11 C2\nn12 C2\n"
           "n13 C3\nn14 C3\nn15 C3\nn22 C3\n"
           "n23 C4\nn24 C4\nn25 C4\nn26 C4\n"
           "n16 C5\nn17 C5\nn18 C5\nn19 C5\nn20 C5\nn21 C5\n";
}

// G(n, p) with an independent generator.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(gen)) e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Partition random_partition(std::size_t n, std::size_t k, std::mt19937_64& gen) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
    std::vector<std::uint32_t> a(n);
    for (auto& c : a) c = pick(gen);
    return Partition(a);
}

}  // namespace fixtures

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline Matrix adjacency(const commimmune::Graph& g) {
    Matrix a(g.node_count(), std::vector<int>(g.node_count(), 0));
    for (auto [i, j] : g.edges()) a[i][j] = a[j][i] = 1;
    return a;
}

// Literal transcription of the measure definitions over member lists C and
// adjacency a. Returns per node: nnc, intra, inter, chb, rho(own), wchb, comm.
struct Measures {
    std::vector<std::int64_t> nnc, intra, inter, chb, comm;
    std::vector<long double> rho_of_node, wchb;
};

inline Measures measures(const Matrix& a, const std::vector<std::vector<std::size_t>>& C) {
    const std::size_t n = a.size();
    std::vector<std::size_t> community_of(n);
    for (std::size_t k = 0; k < C.size(); ++k)
        for (auto i : C[k]) community_of[i] = k;

    Measures m;
    m.nnc.resize(n);
    m.intra.resize(n);
    m.inter.resize(n);
    m.chb.resize(n);
    m.comm.resize(n);
    m.rho_of_node.resize(n);
    m.wchb.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = community_of[i];
        // sum over C_l != C_k of OR_{j in C_l} a_ij
        std::int64_t beta1 = 0;
        for (std::size_t l = 0; l < C.size(); ++l) {
            if (l == k) continue;
            bool any = false;
            for (auto j : C[l]) any = any || a[i][j] == 1;
            beta1 += any ? 1 : 0;
        }
        std::int64_t intra = 0;
        for (auto j : C[k]) intra += a[i][j];
        std::int64_t inter = 0;
        for (std::size_t l = 0; l < C.size(); ++l)
            if (l != k)
                for (auto j : C[l]) inter += a[i][j];
        m.nnc[i] = beta1;
        m.intra[i] = intra;
        m.inter[i] = inter;
        m.chb[i] = static_cast<std::int64_t>(C[k].size()) * intra + beta1 * inter;
        m.comm[i] = intra + inter * inter;
    }
    // rho needs lcm(1..N) as a common denominator, too wide for int64, so
    // the real-valued parts are summed in extended precision.
    std::vector<long double> rho(C.size());
    for (std::size_t k = 0; k < C.size(); ++k) {
        long double sum = 0;
        for (auto i : C[k])
            if (m.inter[i] + m.intra[i] > 0)
                sum += static_cast<long double>(m.inter[i]) / static_cast<long double>(m.inter[i] + m.intra[i]);
        rho[k] = sum / static_cast<long double>(C[k].size());
    }
    for (std::size_t i = 0; i < n; ++i) {
        const long double r = rho[community_of[i]];
        const auto h = static_cast<long double>(static_cast<std::int64_t>(C[community_of[i]].size()) * m.intra[i]);
        const auto b = static_cast<long double>(m.nnc[i] * m.inter[i]);
        m.rho_of_node[i] = r;
        m.wchb[i] = r * h + (1 - r) * b;
    }
    return m;
}

inline std::vector<std::vector<std::size_t>> member_lists(const commimmune::Partition& p) {
    std::vector<std::vector<std::size_t>> C(p.community_count());
    for (std::size_t i = 0; i < p.node_count(); ++i) C[p.assignment()[i]].push_back(i);
    return C;
}

// Q = (1/2m) sum_ij [a_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double modularity(const Matrix& a, const std::vector<std::uint32_t>& c) {
    const std::size_t n = a.size();
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
            two_m += a[i][j];
        }
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c[i] == c[j]) q += a[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

// Betweenness by explicit enumeration of every shortest path between every
// unordered pair.
inline std::vector<double> betweenness(const Matrix& a) {
    const std::size_t n = a.size();
    std::vector<double> bc(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (std::size_t w = 0; w < n; ++w)
                if (a[queue[h]][w] && dist[w] < 0) {
                    dist[w] = dist[queue[h]] + 1;
                    queue.push_back(w);
                }
        for (std::size_t t = s + 1; t < n; ++t) {
            if (dist[t] < 0) continue;
            std::vector<std::vector<std::size_t>> paths;
            std::vector<std::size_t> path{s};
            std::function<void(std::size_t)> walk = [&](std::size_t v) {
                if (v == t) {
                    paths.push_back(path);
                    return;
                }
                for (std::size_t w = 0; w < n; ++w)
                    if (a[v][w] && dist[w] == dist[v] + 1 && dist[w] <= dist[t]) {
                        path.push_back(w);
                        walk(w);
                        path.pop_back();
                    }
            };
            walk(s);
            for (const auto& p : paths)
                for (std::size_t k = 1; k + 1 < p.size(); ++k) bc[p[k]] += 1.0 / static_cast<double>(paths.size());
        }
    }
    return bc;
}

// Size of the connected component of `seed` after deleting `removed` nodes.
inline std::size_t component_size(const commimmune::Graph& g, commimmune::NodeId seed,
                                  const std::vector<bool>& removed) {
    std::vector<bool> seen(g.node_count(), false);
    std::vector<commimmune::NodeId> stack{seed};
    seen[seed] = true;
    std::size_t count = 0;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        ++count;
        for (auto w : g.neighbors(v))
            if (!seen[w] && !removed[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return count;
}

}  // namespace oracle
