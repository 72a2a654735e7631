#include "commimmune/epidemic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "commimmune/error.hpp"
#include "commimmune/random.hpp"
#include "commimmune/strategies.hpp"

namespace commimmune {

void SirConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("gamma must lie in (0, 1], got " + std::to_string(gamma));
    }
    if (runs == 0) throw std::invalid_argument("runs must be at least 1");
}

std::vector<NodeState> immunize(const Graph& g, std::span<const NodeId> targets) {
    std::vector<NodeState> state(g.node_count(), NodeState::Susceptible);
    for (NodeId v : targets) {
        if (v >= g.node_count()) throw std::out_of_range("immunization target out of range");
        state[v] = NodeState::Recovered;
    }
    return state;
}

std::vector<NodeId> ranking_prefix(const Ranking& ranking, double coverage) {
    const std::size_t count = coverage_count(coverage, ranking.order.size());
    return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(count)};
}

SirRun sir_run(const Graph& g, std::span<const NodeState> initial, const SirConfig& cfg,
               std::uint64_t run_seed, const TransitionObserver& observer) {
    if (initial.size() != g.node_count()) throw DataError("state vector does not match the graph");
    std::vector<NodeId> susceptible;
    for (NodeId v = 0; v < initial.size(); ++v) {
        if (initial[v] == NodeState::Susceptible) susceptible.push_back(v);
    }
    if (susceptible.empty()) throw DataError("no susceptible node left to seed the outbreak");

    Rng rng(run_seed);
    std::vector<NodeState> state(initial.begin(), initial.end());
    auto transition = [&](NodeId v, NodeState to) {
        if (observer) observer(v, state[v], to);
        state[v] = to;
    };

    SirRun run;
    run.seed = susceptible[rng.index(susceptible.size())];
    transition(run.seed, NodeState::Infected);
    run.epidemic_size = 1;

    std::vector<NodeId> infected{run.seed};
    std::vector<NodeId> next;
    while (!infected.empty()) {
        ++run.steps;
        next.clear();
        for (NodeId v : infected) {
            for (NodeId u : g.neighbors(v)) {
                if (state[u] == NodeState::Susceptible && rng.bernoulli(cfg.lambda)) {
                    transition(u, NodeState::Infected);
                    next.push_back(u);
                    ++run.epidemic_size;
                }
            }
        }
        for (NodeId v : infected) {
            if (rng.bernoulli(cfg.gamma)) {
                transition(v, NodeState::Recovered);
            } else {
                next.push_back(v);
            }
        }
        infected.swap(next);
    }
    return run;
}

double SirOutcome::standard_error() const {
    if (per_run_sizes.empty()) return 0.0;
    return sd / std::sqrt(static_cast<double>(per_run_sizes.size()));
}

SirOutcome sir_ensemble(const Graph& g, std::span<const NodeId> targets, const SirConfig& cfg) {
    cfg.validate();
    const auto initial = immunize(g, targets);
    std::vector<SirRun> runs(cfg.runs);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t r = first; r < cfg.runs; r += stride) {
            runs[r] = sir_run(g, initial, cfg, derive_seed(cfg.master_seed, r));
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(cfg.threads, cfg.runs));
    if (workers == 1) {
        work(0, 1);
    } else {
        // Surfaces the first worker exception after all threads join.
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        work(w, workers);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    SirOutcome out;
    out.per_run_sizes.reserve(cfg.runs);
    double sum = 0.0;
    double steps = 0.0;
    for (const auto& r : runs) {
        out.per_run_sizes.push_back(r.epidemic_size);
        sum += static_cast<double>(r.epidemic_size);
        steps += static_cast<double>(r.steps);
    }
    const double n = static_cast<double>(cfg.runs);
    out.mean_epidemic_size = sum / n;
    out.mean_steps = steps / n;
    if (cfg.runs > 1) {
        double ss = 0.0;
        for (const auto& r : runs) {
            const double d = static_cast<double>(r.epidemic_size) - out.mean_epidemic_size;
            ss += d * d;
        }
        out.sd = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

double relative_difference(double r_baseline, double r_proposed) {
    if (!(r_baseline > 0.0)) {
        throw DataError("relative difference needs a positive baseline, got " + std::to_string(r_baseline));
    }
    return (r_baseline - r_proposed) / r_baseline;
}

}  // namespace commimmune
