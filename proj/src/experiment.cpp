#include "commimmune/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "commimmune/error.hpp"
#include "commimmune/random.hpp"
#include "commimmune/strategies.hpp"

namespace commimmune {

namespace {

constexpr std::array<std::pair<Strategy, std::string_view>, 9> kNames{{
    {Strategy::Nnc, "nnc"},
    {Strategy::Chb, "chb"},
    {Strategy::Wchb, "wchb"},
    {Strategy::Degree, "degree"},
    {Strategy::Betweenness, "betweenness"},
    {Strategy::Comm, "comm"},
    {Strategy::Acquaintance, "acquaintance"},
    {Strategy::Cbf, "cbf"},
    {Strategy::Bhd, "bhd"},
}};

}  // namespace

std::optional<Strategy> parse_strategy(std::string_view name) {
    for (auto [s, n] : kNames) {
        if (n == name) return s;
    }
    return std::nullopt;
}

std::string_view strategy_name(Strategy s) {
    for (auto [k, n] : kNames) {
        if (k == s) return n;
    }
    throw std::logic_error("unnamed strategy");
}

bool is_stochastic(Strategy s) {
    return s == Strategy::Acquaintance || s == Strategy::Cbf || s == Strategy::Bhd;
}

const std::vector<Strategy>& all_strategies() {
    static const std::vector<Strategy> all = [] {
        std::vector<Strategy> v;
        for (auto [s, _] : kNames) v.push_back(s);
        return v;
    }();
    return all;
}

ScoreMap strategy_scores(Strategy s, const Graph& g, const Partition& p, unsigned threads) {
    switch (s) {
        case Strategy::Nnc: return neighboring_communities_scores(g, p);
        case Strategy::Chb: return community_hub_bridge_scores(g, p);
        case Strategy::Wchb: return weighted_community_hub_bridge_scores(g, p);
        case Strategy::Comm: return comm_scores(g, p);
        case Strategy::Degree: return degree_centrality(g);
        case Strategy::Betweenness: return betweenness_centrality(g, threads);
        default: break;
    }
    throw std::invalid_argument(std::string(strategy_name(s)) + " is stochastic and has no score map");
}

TargetSelector::TargetSelector(const Graph& g, const Partition& p, unsigned threads)
    : g_(g), p_(p), threads_(threads) {
    p.check_covers(g);
}

std::vector<NodeId> TargetSelector::select(Strategy s, double coverage, std::uint64_t seed) {
    switch (s) {
        case Strategy::Acquaintance: return acquaintance(g_, coverage, seed);
        case Strategy::Cbf: return cbf(g_, coverage, seed);
        case Strategy::Bhd: return bhd(g_, coverage, seed);
        default: break;
    }
    auto it = rankings_.find(s);
    if (it == rankings_.end()) it = rankings_.emplace(s, rank(strategy_scores(s, g_, p_, threads_))).first;
    return ranking_prefix(it->second, coverage);
}

void ExperimentSpec::validate() const {
    if (strategies.empty()) throw std::invalid_argument("experiment needs at least one strategy");
    if (coverages.empty()) throw std::invalid_argument("experiment needs at least one coverage");
    for (std::size_t i = 0; i < coverages.size(); ++i) {
        if (!(coverages[i] > 0.0 && coverages[i] < 1.0)) {
            throw std::invalid_argument("coverage " + format_number(coverages[i]) + " outside (0, 1)");
        }
        if (i > 0 && !(coverages[i] > coverages[i - 1])) {
            throw std::invalid_argument("coverage grid must be strictly increasing");
        }
    }
    sir.validate();
}

std::uint64_t cell_seed(std::uint64_t master, std::string_view strategy, std::size_t coverage_index) {
    return derive_seed(derive_seed(master, fnv1a(strategy)), 2 * coverage_index);
}

std::uint64_t strategy_seed(std::uint64_t master, std::string_view strategy, std::size_t coverage_index) {
    return derive_seed(derive_seed(master, fnv1a(strategy)), 2 * coverage_index + 1);
}

std::vector<CurveRow> run_experiment(const Graph& g, const Partition& p, const ExperimentSpec& spec,
                                     const std::function<void(const CurveRow&)>& on_row,
                                     std::size_t resume_rows) {
    spec.validate();
    TargetSelector selector(g, p, spec.sir.threads);
    std::vector<CurveRow> rows;
    std::size_t cell = 0;
    for (Strategy s : spec.strategies) {
        const std::string name(strategy_name(s));
        for (std::size_t c = 0; c < spec.coverages.size(); ++c, ++cell) {
            if (cell < resume_rows) continue;
            const double f = spec.coverages[c];
            const auto targets = selector.select(s, f, strategy_seed(spec.sir.master_seed, name, c));
            SirConfig cfg = spec.sir;
            cfg.master_seed = cell_seed(spec.sir.master_seed, name, c);
            const SirOutcome outcome = sir_ensemble(g, targets, cfg);
            CurveRow row{name, f, outcome.mean_epidemic_size, outcome.sd, cfg.runs};
            if (on_row) on_row(row);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(6) << v;
    return out.str();
}

void write_curve_header(std::ostream& out) { out << "strategy,coverage,mean_epidemic_size,sd,runs\n"; }

void write_curve_row(std::ostream& out, const CurveRow& row) {
    out << row.strategy << ',' << format_number(row.coverage) << ',' << format_number(row.mean_epidemic_size)
        << ',' << format_number(row.sd) << ',' << row.runs << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + text + "'", line);
    }
}

}  // namespace

std::vector<CurveRow> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("curve CSV is empty");
    const auto header = split_csv(line);
    auto column = [&](std::string_view name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParseError("missing column '" + std::string(name) + "'", 1);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_strategy = column("strategy");
    const std::size_t c_coverage = column("coverage");
    const std::size_t c_mean = column("mean_epidemic_size");
    const std::size_t c_sd = column("sd");
    const std::size_t c_runs = column("runs");

    std::vector<CurveRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) throw ParseError("expected " + std::to_string(header.size()) + " fields", line_no);
        CurveRow row;
        row.strategy = f[c_strategy];
        row.coverage = parse_double(f[c_coverage], line_no);
        row.mean_epidemic_size = parse_double(f[c_mean], line_no);
        row.sd = parse_double(f[c_sd], line_no);
        row.runs = static_cast<std::size_t>(parse_double(f[c_runs], line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::vector<const CurveRow*> pick_strategy(const std::vector<CurveRow>& rows, std::string_view wanted,
                                           const char* role) {
    std::string chosen(wanted);
    if (chosen.empty()) {
        for (const auto& r : rows) {
            if (chosen.empty()) {
                chosen = r.strategy;
            } else if (r.strategy != chosen) {
                throw DataError(std::string(role) + " table holds several strategies; select one");
            }
        }
    }
    std::vector<const CurveRow*> out;
    for (const auto& r : rows) {
        if (r.strategy == chosen) out.push_back(&r);
    }
    if (out.empty()) throw DataError(std::string(role) + " table has no rows for strategy '" + chosen + "'");
    return out;
}

}  // namespace

std::vector<DeltaRow> compare_curves(const std::vector<CurveRow>& baseline, const std::vector<CurveRow>& proposed,
                                     std::string_view baseline_strategy, std::string_view proposed_strategy) {
    const auto base = pick_strategy(baseline, baseline_strategy, "baseline");
    const auto prop = pick_strategy(proposed, proposed_strategy, "proposed");
    if (base.size() != prop.size()) throw DataError("coverage grids differ in length");
    std::vector<DeltaRow> out;
    for (std::size_t i = 0; i < base.size(); ++i) {
        // Both tables went through format_number, so compare the printed keys.
        if (format_number(base[i]->coverage) != format_number(prop[i]->coverage)) {
            throw DataError("coverage grids differ at " + format_number(base[i]->coverage) + " vs " +
                            format_number(prop[i]->coverage));
        }
        out.push_back({base[i]->coverage, relative_difference(base[i]->mean_epidemic_size, prop[i]->mean_epidemic_size)});
    }
    return out;
}

void write_delta_csv(std::ostream& out, const std::vector<DeltaRow>& rows) {
    out << "coverage,delta_r\n";
    for (const auto& r : rows) out << format_number(r.coverage) << ',' << format_number(r.delta_r) << '\n';
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::ostringstream hex;
    hex << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(buffer.str());
    return hex.str();
}

void write_manifest(std::ostream& out, const RunManifest& manifest) {
    out << "# commimmune " << kToolVersion << " run manifest (" << manifest.command << ")\n";
    out << "# replay: commimmune " << manifest.command << " --config <this file>\n";
    for (const auto& out_path : manifest.outputs) out << "# output: " << out_path << '\n';
    for (const auto& [k, v] : manifest.settings) out << k << '=' << v << '\n';
    for (const auto& [k, v] : manifest.digests) out << k << '=' << v << '\n';
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

}  // namespace commimmune
