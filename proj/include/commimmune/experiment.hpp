#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commimmune/centrality.hpp"
#include "commimmune/epidemic.hpp"
#include "commimmune/graph.hpp"

namespace commimmune {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Strategy { Nnc, Chb, Wchb, Degree, Betweenness, Comm, Acquaintance, Cbf, Bhd };

std::optional<Strategy> parse_strategy(std::string_view name);
std::string_view strategy_name(Strategy s);
bool is_stochastic(Strategy s);
const std::vector<Strategy>& all_strategies();

/// Scores for a deterministic strategy. Throws std::invalid_argument for
/// stochastic ones.
ScoreMap strategy_scores(Strategy s, const Graph& g, const Partition& p, unsigned threads = 1);

/// Target sets per (strategy, coverage). Rankings are computed once per
/// strategy and cut at each coverage.
class TargetSelector {
public:
    TargetSelector(const Graph& g, const Partition& p, unsigned threads = 1);

    std::vector<NodeId> select(Strategy s, double coverage, std::uint64_t seed);

private:
    const Graph& g_;
    const Partition& p_;
    unsigned threads_;
    std::map<Strategy, Ranking> rankings_;
};

struct ExperimentSpec {
    std::vector<Strategy> strategies;
    /// Strictly increasing, each in (0, 1).
    std::vector<double> coverages;
    SirConfig sir;

    void validate() const;
};

struct CurveRow {
    std::string strategy;
    double coverage = 0.0;
    double mean_epidemic_size = 0.0;
    double sd = 0.0;
    std::size_t runs = 0;
};

/// Seed for the outbreak ensemble of one sweep cell. Depends on the
/// strategy name and coverage index only, never on list order.
std::uint64_t cell_seed(std::uint64_t master, std::string_view strategy, std::size_t coverage_index);
/// Seed handed to a stochastic strategy for one sweep cell.
std::uint64_t strategy_seed(std::uint64_t master, std::string_view strategy, std::size_t coverage_index);

/// Strategy-major, coverage-minor sweep. The first `resume_rows` cells are
/// skipped (their rows were produced earlier); `on_row` fires per new row.
std::vector<CurveRow> run_experiment(const Graph& g, const Partition& p, const ExperimentSpec& spec,
                                     const std::function<void(const CurveRow&)>& on_row = {},
                                     std::size_t resume_rows = 0);

/// Six significant digits, shortest form.
std::string format_number(double v);

void write_curve_header(std::ostream& out);
void write_curve_row(std::ostream& out, const CurveRow& row);
std::vector<CurveRow> read_curve_csv(std::istream& in);

struct DeltaRow {
    double coverage = 0.0;
    double delta_r = 0.0;
};

/// Joins two curve tables on coverage. `*_strategy` selects rows when a
/// table holds several strategies. Throws DataError on mismatched grids.
std::vector<DeltaRow> compare_curves(const std::vector<CurveRow>& baseline, const std::vector<CurveRow>& proposed,
                                     std::string_view baseline_strategy = {},
                                     std::string_view proposed_strategy = {});

void write_delta_csv(std::ostream& out, const std::vector<DeltaRow>& rows);

/// Hex FNV-1a digest of a file's bytes.
std::string file_digest(const std::string& path);

/// Flat `key=value` snapshot of a run, readable back as a config file.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> settings;
    std::vector<std::pair<std::string, std::string>> digests;
    std::vector<std::string> outputs;
};

void write_manifest(std::ostream& out, const RunManifest& manifest);

/// Reads `key=value` lines (blank lines and `#` comments skipped).
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

}  // namespace commimmune
