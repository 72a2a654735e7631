#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "commimmune/centrality.hpp"
#include "commimmune/graph.hpp"

namespace commimmune {

enum class NodeState : std::uint8_t { Susceptible, Infected, Recovered };

struct SirConfig {
    /// Per-contact, per-step transmission probability, in [0, 1].
    double lambda = 0.2;
    /// Per-step recovery probability, in (0, 1].
    double gamma = 1.0;
    std::size_t runs = 600;
    std::uint64_t master_seed = 0;
    /// Worker threads for ensembles; results never depend on it.
    unsigned threads = 1;

    /// Throws std::invalid_argument on out-of-range parameters.
    void validate() const;
};

/// Immunized nodes start Recovered, everything else Susceptible.
std::vector<NodeState> immunize(const Graph& g, std::span<const NodeId> targets);

/// The first ceil(coverage * N) nodes of a ranking.
std::vector<NodeId> ranking_prefix(const Ranking& ranking, double coverage);

struct SirRun {
    /// Nodes that went through infection (the seed included).
    std::size_t epidemic_size = 0;
    std::size_t steps = 0;
    NodeId seed = 0;
};

using TransitionObserver = std::function<void(NodeId, NodeState from, NodeState to)>;

/// One synchronous discrete-time SIR outbreak from a uniformly chosen
/// susceptible seed. Each step, every infected node tries each susceptible
/// neighbor with probability lambda (new cases become infectious next
/// step), then recovers with probability gamma. Throws DataError when no
/// node is susceptible.
SirRun sir_run(const Graph& g, std::span<const NodeState> initial, const SirConfig& cfg,
               std::uint64_t run_seed, const TransitionObserver& observer = {});

struct SirOutcome {
    double mean_epidemic_size = 0.0;
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    double sd = 0.0;
    double mean_steps = 0.0;
    std::vector<std::size_t> per_run_sizes;

    double standard_error() const;
};

/// `cfg.runs` independent outbreaks; run r is seeded with
/// derive_seed(cfg.master_seed, r).
SirOutcome sir_ensemble(const Graph& g, std::span<const NodeId> targets, const SirConfig& cfg);

/// (baseline - proposed) / baseline; positive when the proposed strategy
/// contains the outbreak better. Throws DataError if baseline <= 0.
double relative_difference(double r_baseline, double r_proposed);

}  // namespace commimmune
