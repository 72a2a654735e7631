// commimmune: generate, detect, rank, simulate, compare.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commimmune/community.hpp"
#include "commimmune/error.hpp"
#include "commimmune/experiment.hpp"
#include "commimmune/lfr.hpp"

namespace ci = commimmune;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kFeasibility = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // generate
    ci::LfrParams lfr;
    // shared
    std::string graph;
    std::string partition;
    std::uint64_t louvain_seed = 0;
    std::string mixing = "edge";
    std::vector<std::string> strategies;
    std::vector<double> coverages{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
    double lambda = 0.2;
    double gamma = 1.0;
    std::size_t runs = 600;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
    bool resume = false;
    std::string tie_rule = "index";
    std::uint64_t tie_seed = 0;
    std::string graph_digest;
    std::string partition_digest;
    // compare
    std::string baseline;
    std::string proposed;
    std::string baseline_strategy;
    std::string proposed_strategy;
    std::string baseline_digest;
    std::string proposed_digest;
    std::string config;
};

std::string join(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
    return s;
}

std::string join(const std::vector<double>& items) {
    std::vector<std::string> text;
    for (double v : items) text.push_back(ci::format_number(v));
    return join(text);
}

struct Cli {
    CLI::App app{"Community-aware immunization experiments"};
    Options opt;
    CLI::App* generate = nullptr;
    CLI::App* detect = nullptr;
    CLI::App* rank = nullptr;
    CLI::App* simulate = nullptr;
    CLI::App* compare = nullptr;

    Cli() {
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(ci::kToolVersion));

        generate = app.add_subcommand("generate", "LFR-style benchmark graph with ground-truth communities");
        auto& p = opt.lfr;
        generate->add_option("--n", p.n, "Node count")->capture_default_str();
        generate->add_option("--avg-degree", p.avg_degree)->capture_default_str();
        generate->add_option("--max-degree", p.max_degree)->capture_default_str();
        generate->add_option("--degree-exponent", p.degree_exponent)->capture_default_str();
        generate->add_option("--community-exponent", p.community_exponent)->capture_default_str();
        generate->add_option("--mu", p.mu, "Mixing parameter in [0, 1)")->capture_default_str();
        generate->add_option("--min-community", p.min_community)->capture_default_str();
        generate->add_option("--max-community", p.max_community)->capture_default_str();
        generate->add_option("--seed", opt.seed, "Generator seed (default 1)");
        generate->add_option("--out", opt.out, "Output prefix for .edges/.communities/.manifest")->required();
        add_config(generate);

        detect = app.add_subcommand("detect", "Louvain communities plus N, E, Q, N_c and mixing");
        detect->add_option("--graph", opt.graph)->required();
        detect->add_option("--partition", opt.partition, "Ground-truth partition; skips detection");
        detect->add_option("--seed", opt.seed, "Louvain seed (default 0)");
        detect->add_option("--mixing", opt.mixing, "Mixing estimator")
            ->check(CLI::IsMember({"edge", "node"}))
            ->capture_default_str();
        detect->add_option("--out", opt.out, "Partition file to write");
        add_digests(detect);
        add_config(detect);

        rank = app.add_subcommand("rank", "Score and rank nodes under one strategy (CSV node,score,rank)");
        rank->add_option("--graph", opt.graph)->required();
        rank->add_option("--partition", opt.partition, "Partition file; Louvain is run when absent");
        rank->add_option("--louvain-seed", opt.louvain_seed)->capture_default_str();
        rank->add_option("--strategy", opt.strategies)->required()->expected(1);
        rank->add_option("--seed", opt.seed, "Seed for stochastic strategies");
        rank->add_option("--coverage", opt.coverages, "Coverage for stochastic strategies")->expected(1);
        rank->add_option("--tie-rule", opt.tie_rule)->check(CLI::IsMember({"index", "shuffle"}))->capture_default_str();
        rank->add_option("--tie-seed", opt.tie_seed)->capture_default_str();
        rank->add_option("--threads", opt.threads)->capture_default_str();
        rank->add_option("--out", opt.out, "CSV path (stdout when absent)");
        add_digests(rank);
        add_config(rank);

        simulate = app.add_subcommand("simulate", "SIR outbreaks per strategy and coverage (CSV curves)");
        simulate->add_option("--graph", opt.graph)->required();
        simulate->add_option("--partition", opt.partition, "Partition file; Louvain is run when absent");
        simulate->add_option("--louvain-seed", opt.louvain_seed)->capture_default_str();
        simulate->add_option("--strategy", opt.strategies)->required()->delimiter(',');
        simulate->add_option("--coverage", opt.coverages)->delimiter(',')->capture_default_str();
        simulate->add_option("--lambda", opt.lambda)->capture_default_str();
        simulate->add_option("--gamma", opt.gamma)->capture_default_str();
        simulate->add_option("--runs", opt.runs)->capture_default_str();
        simulate->add_option("--seed", opt.seed, "Master seed (required with stochastic strategies)");
        simulate->add_option("--threads", opt.threads)->capture_default_str();
        simulate->add_option("--out", opt.out, "Curve CSV path")->required();
        simulate->add_flag("--resume", opt.resume, "Keep complete rows of an existing output and continue");
        add_digests(simulate);
        add_config(simulate);

        compare = app.add_subcommand("compare", "Relative difference of outbreak size per coverage");
        compare->add_option("--baseline", opt.baseline)->required();
        compare->add_option("--proposed", opt.proposed)->required();
        compare->add_option("--baseline-strategy", opt.baseline_strategy);
        compare->add_option("--proposed-strategy", opt.proposed_strategy);
        compare->add_option("--out", opt.out, "CSV path (stdout when absent)");
        compare->add_option("--baseline-digest", opt.baseline_digest)->group("");
        compare->add_option("--proposed-digest", opt.proposed_digest)->group("");
        add_config(compare);
    }

    void add_config(CLI::App* sub) {
        sub->add_option("--config", opt.config, "key=value file (a run manifest works); flags take precedence");
    }

    void add_digests(CLI::App* sub) {
        sub->add_option("--graph-digest", opt.graph_digest)->group("");
        sub->add_option("--partition-digest", opt.partition_digest)->group("");
    }

    CLI::App* chosen() const { return app.get_subcommands().front(); }
};

// argv with config entries spliced in for every option the user did not
// pass on the command line. Works on the raw tokens so that a config file
// can supply required options.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    if (args.size() < 2) return args;
    std::string config;
    std::set<std::string> passed;
    for (std::size_t i = 2; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) continue;
        const auto eq = a.find('=');
        const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        passed.insert(name);
        if (name == "config") {
            if (eq != std::string::npos) {
                config = a.substr(eq + 1);
            } else if (i + 1 < args.size()) {
                config = args[i + 1];
            }
        }
    }
    if (config.empty()) return args;

    const Cli lookup;
    CLI::App* sub = nullptr;
    try {
        sub = lookup.app.get_subcommand(args[1]);
    } catch (const CLI::OptionNotFound&) {
        return args;  // the real parse reports it
    }
    std::ifstream in(config);
    if (!in) throw ci::DataError("cannot open config file '" + config + "'");
    std::vector<std::string> merged{args[0], args[1]};
    for (const auto& [key, value] : ci::read_key_values(in)) {
        if (key == "config") throw UsageError("config files cannot nest");
        const CLI::Option* o = nullptr;
        try {
            o = sub->get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("unknown config key '" + key + "' for " + sub->get_name());
        }
        if (passed.count(key) > 0) continue;
        if (o->get_expected_min() == 0) {
            if (value == "true" || value == "1") merged.push_back("--" + key);
            continue;
        }
        merged.push_back("--" + key);
        merged.push_back(value);
    }
    merged.insert(merged.end(), args.begin() + 2, args.end());
    return merged;
}

void parse(Cli& cli, const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    cli.app.parse(static_cast<int>(argv.size()), argv.data());
}

std::unique_ptr<std::ostream> open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    if (path.empty()) return nullptr;
    auto f = std::make_unique<std::ofstream>(path, mode);
    if (!*f) throw ci::DataError("cannot write '" + path + "'");
    return f;
}

void check_digest(const std::string& path, const std::string& expected, const char* what) {
    if (expected.empty() || path.empty()) return;
    const std::string actual = ci::file_digest(path);
    if (actual != expected) {
        throw ci::DataError(std::string(what) + " '" + path + "' changed since the manifest was written (" + actual +
                            " != " + expected + ")");
    }
}

struct Loaded {
    ci::Graph graph;
    ci::Partition partition;
};

ci::Graph load_graph(const std::string& path) {
    auto report = ci::load_edge_list_file(path);
    if (report.duplicates_dropped + report.self_loops_dropped > 0) {
        std::cerr << "note: dropped " << report.duplicates_dropped << " duplicate edges and "
                  << report.self_loops_dropped << " self-loops\n";
    }
    return std::move(report.graph);
}

Loaded load_inputs(const Options& opt, bool need_partition) {
    check_digest(opt.graph, opt.graph_digest, "graph");
    check_digest(opt.partition, opt.partition_digest, "partition");
    Loaded l{load_graph(opt.graph), {}};
    if (!opt.partition.empty()) {
        l.partition = ci::load_partition_file(opt.partition, l.graph);
    } else if (need_partition) {
        l.partition = ci::louvain(l.graph, opt.louvain_seed);
    } else {
        l.partition = ci::Partition::single_community(l.graph.node_count());
    }
    return l;
}

ci::RunManifest base_manifest(const Cli& cli) {
    ci::RunManifest m;
    m.command = cli.chosen()->get_name();
    return m;
}

void write_manifest_file(const std::string& path, const ci::RunManifest& m) {
    auto out = open_out(path);
    ci::write_manifest(*out, m);
}

int cmd_generate(const Cli& cli) {
    ci::LfrParams p = cli.opt.lfr;
    p.seed = cli.opt.seed.value_or(1);
    p.validate();
    const std::string prefix = cli.opt.out;
    auto m = base_manifest(cli);
    m.settings = {{"n", std::to_string(p.n)},
                  {"avg-degree", ci::format_number(p.avg_degree)},
                  {"max-degree", std::to_string(p.max_degree)},
                  {"degree-exponent", ci::format_number(p.degree_exponent)},
                  {"community-exponent", ci::format_number(p.community_exponent)},
                  {"mu", ci::format_number(p.mu)},
                  {"min-community", std::to_string(p.min_community)},
                  {"max-community", std::to_string(p.max_community)},
                  {"seed", std::to_string(p.seed)},
                  {"out", prefix}};
    m.outputs = {prefix + ".edges", prefix + ".communities"};
    write_manifest_file(prefix + ".manifest", m);

    const ci::LfrGraph lfr = ci::generate(p);
    {
        auto edges = open_out(prefix + ".edges");
        *edges << "# LFR-style graph n=" << p.n << " mu=" << ci::format_number(p.mu) << " seed=" << p.seed << '\n';
        ci::save_edge_list(*edges, lfr.graph);
        auto comms = open_out(prefix + ".communities");
        ci::save_partition(*comms, lfr.graph, lfr.communities);
    }
    std::cout << "N=" << lfr.graph.node_count() << " E=" << lfr.graph.edge_count()
              << " communities=" << lfr.communities.community_count()
              << " mixing=" << ci::format_number(lfr.mixing) << " attempts=" << lfr.attempts << '\n';
    return kOk;
}

int cmd_detect(const Cli& cli) {
    const auto& opt = cli.opt;
    check_digest(opt.graph, opt.graph_digest, "graph");
    check_digest(opt.partition, opt.partition_digest, "partition");
    const ci::Graph g = load_graph(opt.graph);
    const std::uint64_t seed = opt.seed.value_or(0);
    ci::Partition p = opt.partition.empty() ? ci::louvain(g, seed) : ci::load_partition_file(opt.partition, g);
    const double q = ci::modularity(g, p);
    const auto estimator = opt.mixing == "node" ? ci::MixingEstimator::NodeMean : ci::MixingEstimator::EdgeFraction;
    const double mu = ci::estimate_mixing(g, p, estimator);
    if (!opt.out.empty()) {
        auto m = base_manifest(cli);
        m.settings = {{"graph", opt.graph}, {"seed", std::to_string(seed)}, {"mixing", opt.mixing}, {"out", opt.out}};
        if (!opt.partition.empty()) m.settings.emplace_back("partition", opt.partition);
        m.digests.emplace_back("graph-digest", ci::file_digest(opt.graph));
        if (!opt.partition.empty()) m.digests.emplace_back("partition-digest", ci::file_digest(opt.partition));
        m.outputs = {opt.out};
        write_manifest_file(opt.out + ".manifest", m);
        auto out = open_out(opt.out);
        ci::save_partition(*out, g, p);
    }
    std::cout << "N=" << g.node_count() << "\nE=" << g.edge_count() << "\nQ=" << ci::format_number(q)
              << "\nN_c=" << p.community_count() << "\nmu=" << ci::format_number(mu) << '\n';
    return kOk;
}

ci::Strategy strategy_or_throw(const std::string& name) {
    auto s = ci::parse_strategy(name);
    if (!s) {
        std::string known;
        for (auto k : ci::all_strategies()) known += (known.empty() ? "" : "|") + std::string(ci::strategy_name(k));
        throw UsageError("unknown strategy '" + name + "' (expected " + known + ")");
    }
    return *s;
}

int cmd_rank(const Cli& cli, CLI::App* sub) {
    const auto& opt = cli.opt;
    const ci::Strategy s = strategy_or_throw(opt.strategies.front());
    const bool stochastic = ci::is_stochastic(s);
    if (stochastic && !opt.seed) throw UsageError("strategy " + opt.strategies.front() + " requires --seed");
    if (stochastic && sub->get_option("--coverage")->count() == 0) {
        throw UsageError("strategy " + opt.strategies.front() + " requires --coverage");
    }
    const bool needs_partition = s == ci::Strategy::Nnc || s == ci::Strategy::Chb || s == ci::Strategy::Wchb ||
                                 s == ci::Strategy::Comm;
    const Loaded in = load_inputs(opt, needs_partition);

    if (!opt.out.empty()) {
        auto m = base_manifest(cli);
        m.settings = {{"graph", opt.graph},
                      {"louvain-seed", std::to_string(opt.louvain_seed)},
                      {"strategy", opt.strategies.front()},
                      {"tie-rule", opt.tie_rule},
                      {"tie-seed", std::to_string(opt.tie_seed)},
                      {"out", opt.out}};
        if (opt.seed) m.settings.emplace_back("seed", std::to_string(*opt.seed));
        if (stochastic) m.settings.emplace_back("coverage", ci::format_number(opt.coverages.front()));
        if (!opt.partition.empty()) m.settings.emplace_back("partition", opt.partition);
        m.digests.emplace_back("graph-digest", ci::file_digest(opt.graph));
        if (!opt.partition.empty()) m.digests.emplace_back("partition-digest", ci::file_digest(opt.partition));
        m.outputs = {opt.out};
        write_manifest_file(opt.out + ".manifest", m);
    }
    auto file = open_out(opt.out);
    std::ostream& out = file ? *file : std::cout;
    out << "node,score,rank\n";
    if (stochastic) {
        ci::TargetSelector selector(in.graph, in.partition, opt.threads);
        const auto targets = selector.select(s, opt.coverages.front(), *opt.seed);
        // Selected nodes in selection order; the score marks selection.
        for (std::size_t r = 0; r < targets.size(); ++r) {
            out << in.graph.name(targets[r]) << ",1," << r + 1 << '\n';
        }
        return kOk;
    }
    const ci::ScoreMap scores = ci::strategy_scores(s, in.graph, in.partition, opt.threads);
    const auto rule = opt.tie_rule == "shuffle" ? ci::TieRule::SeededShuffle : ci::TieRule::LowerIndex;
    const ci::Ranking ranking = ci::rank(scores, rule, opt.tie_seed);
    for (std::size_t r = 0; r < ranking.order.size(); ++r) {
        const ci::NodeId v = ranking.order[r];
        out << in.graph.name(v) << ',' << ci::format_number(scores.scores[v]) << ',' << r + 1 << '\n';
    }
    return kOk;
}

// Number of leading rows of an existing curve file that match the sweep;
// the file is rewritten with just those rows.
std::size_t prepare_resume(const std::string& path, const ci::ExperimentSpec& spec) {
    std::ifstream in(path);
    if (!in) return 0;
    std::vector<ci::CurveRow> rows;
    try {
        rows = ci::read_curve_csv(in);
    } catch (const ci::DataError&) {
        return 0;
    }
    std::size_t keep = 0;
    std::size_t cell = 0;
    for (auto s : spec.strategies) {
        for (double f : spec.coverages) {
            if (cell < rows.size() && rows[cell].strategy == ci::strategy_name(s) &&
                ci::format_number(rows[cell].coverage) == ci::format_number(f) && rows[cell].runs == spec.sir.runs) {
                keep = ++cell;
            } else {
                cell = rows.size() + 1;
            }
        }
    }
    std::ostringstream text;
    ci::write_curve_header(text);
    for (std::size_t i = 0; i < keep; ++i) ci::write_curve_row(text, rows[i]);
    auto out = open_out(path);
    *out << text.str();
    return keep;
}

int cmd_simulate(const Cli& cli) {
    const auto& opt = cli.opt;
    ci::ExperimentSpec spec;
    bool stochastic = false;
    for (const auto& name : opt.strategies) {
        spec.strategies.push_back(strategy_or_throw(name));
        stochastic |= ci::is_stochastic(spec.strategies.back());
    }
    if (stochastic && !opt.seed) throw UsageError("stochastic strategies require --seed");
    spec.coverages = opt.coverages;
    spec.sir.lambda = opt.lambda;
    spec.sir.gamma = opt.gamma;
    spec.sir.runs = opt.runs;
    spec.sir.master_seed = opt.seed.value_or(0);
    spec.sir.threads = opt.threads;
    spec.validate();

    const Loaded in = load_inputs(opt, true);

    auto m = base_manifest(cli);
    m.settings = {{"graph", opt.graph},
                  {"louvain-seed", std::to_string(opt.louvain_seed)},
                  {"strategy", join(opt.strategies)},
                  {"coverage", join(opt.coverages)},
                  {"lambda", ci::format_number(opt.lambda)},
                  {"gamma", ci::format_number(opt.gamma)},
                  {"runs", std::to_string(opt.runs)},
                  {"seed", std::to_string(spec.sir.master_seed)},
                  {"out", opt.out}};
    if (!opt.partition.empty()) m.settings.emplace_back("partition", opt.partition);
    m.digests.emplace_back("graph-digest", ci::file_digest(opt.graph));
    if (!opt.partition.empty()) m.digests.emplace_back("partition-digest", ci::file_digest(opt.partition));
    m.outputs = {opt.out};
    write_manifest_file(opt.out + ".manifest", m);

    const std::size_t done = opt.resume ? prepare_resume(opt.out, spec) : 0;
    auto out = done > 0 ? open_out(opt.out, std::ios::app) : open_out(opt.out);
    if (done == 0) ci::write_curve_header(*out);
    const std::size_t total = spec.strategies.size() * spec.coverages.size();
    std::size_t finished = done;
    ci::run_experiment(
        in.graph, in.partition, spec,
        [&](const ci::CurveRow& row) {
            ci::write_curve_row(*out, row);
            out->flush();
            std::cerr << "[" << ++finished << "/" << total << "] " << row.strategy << " f="
                      << ci::format_number(row.coverage) << " mean=" << ci::format_number(row.mean_epidemic_size)
                      << '\n';
        },
        done);
    return kOk;
}

int cmd_compare(const Cli& cli) {
    const auto& opt = cli.opt;
    auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ci::DataError("cannot open '" + path + "'");
        return ci::read_curve_csv(in);
    };
    check_digest(opt.baseline, opt.baseline_digest, "baseline");
    check_digest(opt.proposed, opt.proposed_digest, "proposed");
    if (!opt.out.empty()) {
        auto m = base_manifest(cli);
        m.settings = {{"baseline", opt.baseline}, {"proposed", opt.proposed}, {"out", opt.out}};
        if (!opt.baseline_strategy.empty()) m.settings.emplace_back("baseline-strategy", opt.baseline_strategy);
        if (!opt.proposed_strategy.empty()) m.settings.emplace_back("proposed-strategy", opt.proposed_strategy);
        m.digests = {{"baseline-digest", ci::file_digest(opt.baseline)},
                     {"proposed-digest", ci::file_digest(opt.proposed)}};
        m.outputs = {opt.out};
        write_manifest_file(opt.out + ".manifest", m);
    }
    const auto rows =
        ci::compare_curves(read(opt.baseline), read(opt.proposed), opt.baseline_strategy, opt.proposed_strategy);
    auto file = open_out(opt.out);
    ci::write_delta_csv(file ? *file : std::cout, rows);
    return kOk;
}

int dispatch(Cli& cli) {
    CLI::App* sub = cli.chosen();
    if (sub == cli.generate) return cmd_generate(cli);
    if (sub == cli.detect) return cmd_detect(cli);
    if (sub == cli.rank) return cmd_rank(cli, sub);
    if (sub == cli.simulate) return cmd_simulate(cli);
    return cmd_compare(cli);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    auto cli = std::make_unique<Cli>();
    try {
        try {
            parse(*cli, merge_config(args));
        } catch (const CLI::ParseError& e) {
            const int code = cli->app.exit(e);
            return code == 0 ? kOk : kUsage;
        }
        return dispatch(*cli);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ci::FeasibilityError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kFeasibility;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
}
