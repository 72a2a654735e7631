#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "commimmune/centrality.hpp"
#include "commimmune/community.hpp"
#include "commimmune/epidemic.hpp"
#include "commimmune/error.hpp"
#include "commimmune/experiment.hpp"
#include "commimmune/lfr.hpp"
#include "commimmune/strategies.hpp"

namespace py = pybind11;
using namespace commimmune;

namespace {

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in).graph;
}

Partition parse_partition(const std::string& text, const Graph& g) {
    std::istringstream in(text);
    return load_partition(in, g);
}

MixingEstimator estimator_from(const std::string& name) {
    if (name == "edge") return MixingEstimator::EdgeFraction;
    if (name == "node") return MixingEstimator::NodeMean;
    throw std::invalid_argument("estimator must be 'edge' or 'node'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "commimmune core bindings";
    m.attr("__version__") = std::string(kToolVersion);

    auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", data_error.ptr());
    py::register_exception<FeasibilityError>(m, "FeasibilityError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
                 return Graph::from_edges(n, edges);
             }),
             py::arg("node_count"), py::arg("edges"))
        .def_static("parse", &parse_graph, py::arg("text"), "Graph from edge-list text.")
        .def_static("load", [](const std::string& path) { return load_edge_list_file(path).graph; }, py::arg("path"))
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("neighbors", [](const Graph& g, NodeId i) {
            const auto n = g.neighbors(i);
            return std::vector<NodeId>(n.begin(), n.end());
        })
        .def("has_edge", &Graph::has_edge)
        .def("edges", &Graph::edges)
        .def("name", &Graph::name)
        .def("find", &Graph::find)
        .def("__len__", &Graph::node_count)
        .def("__repr__", [](const Graph& g) {
            return "<Graph N=" + std::to_string(g.node_count()) + " E=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<Partition>(m, "Partition")
        .def(py::init<const std::vector<std::uint32_t>&>(), py::arg("assignment"))
        .def_static("parse", &parse_partition, py::arg("text"), py::arg("graph"))
        .def_static("load", &load_partition_file, py::arg("path"), py::arg("graph"))
        .def_static("singletons", &Partition::singletons)
        .def_property_readonly("community_count", &Partition::community_count)
        .def_property_readonly("assignment", &Partition::assignment)
        .def("community_of", &Partition::community_of)
        .def("members", [](const Partition& p, CommunityId c) {
            const auto s = p.members(c);
            return std::vector<NodeId>(s.begin(), s.end());
        })
        .def("__len__", &Partition::node_count)
        .def("__eq__", [](const Partition& a, const Partition& b) { return a == b; });

    py::class_<LouvainResult>(m, "LouvainResult")
        .def_readonly("partition", &LouvainResult::partition)
        .def_readonly("modularity", &LouvainResult::modularity)
        .def_readonly("level_modularity", &LouvainResult::level_modularity);

    m.def("modularity", &modularity, py::arg("graph"), py::arg("partition"));
    m.def("run_louvain", &run_louvain, py::arg("graph"), py::arg("seed") = 0);
    m.def("louvain", &louvain, py::arg("graph"), py::arg("seed") = 0);
    m.def(
        "estimate_mixing",
        [](const Graph& g, const Partition& p, const std::string& estimator) {
            return estimate_mixing(g, p, estimator_from(estimator));
        },
        py::arg("graph"), py::arg("partition"), py::arg("estimator") = "edge");
    m.def("interconnection_density", &interconnection_density, py::arg("graph"), py::arg("partition"),
          py::arg("community"));

    auto scores = [](ScoreMap (*fn)(const Graph&, const Partition&)) {
        return [fn](const Graph& g, const Partition& p) { return fn(g, p).scores; };
    };
    m.def("nnc", scores(&neighboring_communities_scores), py::arg("graph"), py::arg("partition"),
          "Number of distinct neighboring communities per node.");
    m.def("chb", scores(&community_hub_bridge_scores), py::arg("graph"), py::arg("partition"));
    m.def("wchb", scores(&weighted_community_hub_bridge_scores), py::arg("graph"), py::arg("partition"));
    m.def("comm", scores(&comm_scores), py::arg("graph"), py::arg("partition"));
    m.def("degree", [](const Graph& g) { return degree_centrality(g).scores; }, py::arg("graph"));
    m.def(
        "betweenness",
        [](const Graph& g, unsigned threads) {
            py::gil_scoped_release release;
            return betweenness_centrality(g, threads).scores;
        },
        py::arg("graph"), py::arg("threads") = 1);
    m.def(
        "rank",
        [](const std::vector<double>& s, const std::string& tie_rule, std::uint64_t tie_seed) {
            if (tie_rule != "index" && tie_rule != "shuffle") throw std::invalid_argument("tie_rule must be 'index' or 'shuffle'");
            const auto rule = tie_rule == "shuffle" ? TieRule::SeededShuffle : TieRule::LowerIndex;
            return rank(ScoreMap{"", s}, rule, tie_seed).order;
        },
        py::arg("scores"), py::arg("tie_rule") = "index", py::arg("tie_seed") = 0,
        "Node ids by decreasing score.");

    m.def("acquaintance", &acquaintance, py::arg("graph"), py::arg("coverage"), py::arg("seed"));
    m.def("cbf", py::overload_cast<const Graph&, double, std::uint64_t>(&cbf), py::arg("graph"), py::arg("coverage"),
          py::arg("seed"));
    m.def("bhd", py::overload_cast<const Graph&, double, std::uint64_t>(&bhd), py::arg("graph"), py::arg("coverage"),
          py::arg("seed"));

    py::class_<SirOutcome>(m, "SirOutcome")
        .def_readonly("mean_epidemic_size", &SirOutcome::mean_epidemic_size)
        .def_readonly("sd", &SirOutcome::sd)
        .def_readonly("mean_steps", &SirOutcome::mean_steps)
        .def_readonly("per_run_sizes", &SirOutcome::per_run_sizes)
        .def_property_readonly("standard_error", &SirOutcome::standard_error);

    m.def(
        "sir_ensemble",
        [](const Graph& g, const std::vector<NodeId>& immunized, double lambda, double gamma, std::size_t runs,
           std::uint64_t seed, unsigned threads) {
            SirConfig cfg;
            cfg.lambda = lambda;
            cfg.gamma = gamma;
            cfg.runs = runs;
            cfg.master_seed = seed;
            cfg.threads = threads;
            py::gil_scoped_release release;
            return sir_ensemble(g, immunized, cfg);
        },
        py::arg("graph"), py::arg("immunized") = std::vector<NodeId>{}, py::arg("lam") = 0.2, py::arg("gamma") = 1.0,
        py::arg("runs") = 600, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("relative_difference", &relative_difference, py::arg("baseline"), py::arg("proposed"));

    py::class_<LfrGraph>(m, "LfrResult")
        .def_readonly("graph", &LfrGraph::graph)
        .def_readonly("communities", &LfrGraph::communities)
        .def_readonly("mixing", &LfrGraph::mixing)
        .def_readonly("attempts", &LfrGraph::attempts);

    m.def(
        "generate_lfr",
        [](std::size_t n, double avg_degree, std::size_t max_degree, double degree_exponent, double community_exponent,
           double mu, std::size_t min_community, std::size_t max_community, std::uint64_t seed) {
            LfrParams p;
            p.n = n;
            p.avg_degree = avg_degree;
            p.max_degree = max_degree;
            p.degree_exponent = degree_exponent;
            p.community_exponent = community_exponent;
            p.mu = mu;
            p.min_community = min_community;
            p.max_community = max_community;
            p.seed = seed;
            p.validate();
            return generate(p);
        },
        py::arg("n") = 15000, py::arg("avg_degree") = 7.0, py::arg("max_degree") = 122,
        py::arg("degree_exponent") = 3.0, py::arg("community_exponent") = 2.5, py::arg("mu") = 0.1,
        py::arg("min_community") = 100, py::arg("max_community") = 500, py::arg("seed") = 1);
}
