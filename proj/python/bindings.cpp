#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <tuple>

#include "resistweave/cutweave.hpp"
#include "resistweave/decompose.hpp"
#include "resistweave/experiment.hpp"
#include "resistweave/generators.hpp"
#include "resistweave/io.hpp"
#include "resistweave/sparsify.hpp"
#include "resistweave/spectral.hpp"

namespace py = pybind11;
using namespace resistweave;

namespace {

using EdgeTuple = std::tuple<VertexId, VertexId, double, std::size_t>;

WeightedMultigraph from_tuples(std::size_t n, const std::vector<py::tuple>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& t : edges) {
    if (t.size() < 2 || t.size() > 4) throw GraphError("edges are (u, v[, w[, mult]]) tuples");
    Edge e{t[0].cast<VertexId>(), t[1].cast<VertexId>(), 1.0, 1};
    if (t.size() > 2) e.w = t[2].cast<double>();
    if (t.size() > 3) e.mult = t[3].cast<std::size_t>();
    out.push_back(e);
  }
  return WeightedMultigraph(n, std::move(out));
}

py::dict sparsifier_dict(const SparsifierResult& s) {
  py::dict d;
  d["graph"] = s.graph;
  d["matchings"] = s.matchings;
  d["scale"] = s.scale;
  d["d_target"] = s.d_target;
  d["lambda2"] = s.lambda2;
  d["resamples"] = s.resamples;
  d["connected"] = s.connected;
  d["edges"] = s.edge_count();
  return d;
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["pairs"] = r.pairs;
  d["r_g"] = r.r_g;
  d["r_h"] = r.r_h;
  d["errors"] = r.errors;
  d["max"] = r.max;
  d["median"] = r.median;
  d["p95"] = r.p95;
  d["all_pairs"] = r.all_pairs;
  d["connected"] = r.connected;
  d["pair_seed"] = r.pair_seed;
  return d;
}

py::dict certificate_dict(const ResistanceCertificate& c) {
  py::dict d;
  d["holds"] = c.holds;
  d["margin"] = c.margin;
  d["lambda2"] = c.lambda2;
  d["degree"] = c.degree;
  d["w_max"] = c.w_max;
  d["worst"] = c.worst;
  d["violations"] = c.violations;
  return d;
}

ExperimentConfig make_config(const std::string& graph, std::uint64_t seed, std::optional<double> epsilon,
                             std::optional<std::size_t> d_target, std::size_t trials, std::size_t pairs,
                             double round_constant, int weave_degree) {
  ExperimentConfig cfg;
  cfg.generator = parse_generator_spec(graph);
  cfg.seed = seed;
  cfg.epsilon = epsilon;
  cfg.d_target = d_target;
  cfg.trials = trials;
  cfg.pair_budget = pairs;
  cfg.round_constant = round_constant;
  cfg.weave_degree = weave_degree;
  validate(cfg);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_resistweave, m) {
  m.doc() = "Resistance sparsifiers from perfect-matching decompositions";

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<WeightedMultigraph>(m, "Graph")
      .def(py::init<std::size_t>(), py::arg("n"))
      .def(py::init(&from_tuples), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &WeightedMultigraph::num_vertices)
      .def("num_edges", &WeightedMultigraph::num_edges)
      .def("num_records", &WeightedMultigraph::num_records)
      .def("edges",
           [](const WeightedMultigraph& g) {
             std::vector<EdgeTuple> out;
             for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.w, e.mult);
             return out;
           })
      .def("weighted_degree", &WeightedMultigraph::weighted_degree)
      .def("weighted_degrees", &WeightedMultigraph::weighted_degrees)
      .def("regular_degree", &WeightedMultigraph::regular_degree, py::arg("tol") = 1e-9)
      .def("is_connected", &WeightedMultigraph::is_connected)
      .def("is_bipartite", &WeightedMultigraph::is_bipartite)
      .def("__eq__", [](const WeightedMultigraph& a, const WeightedMultigraph& b) { return a == b; })
      .def("__repr__", [](const WeightedMultigraph& g) {
        return "<Graph n=" + std::to_string(g.num_vertices()) + " edges=" + std::to_string(g.num_edges()) + ">";
      });

  m.def("complete_graph", &complete_graph, py::arg("n"));
  m.def("cycle_graph", &cycle_graph, py::arg("n"));
  m.def("hypercube", &hypercube, py::arg("dim"));
  m.def("circulant", &circulant, py::arg("n"), py::arg("offsets"));
  m.def(
      "random_regular",
      [](std::size_t n, std::size_t degree, std::uint64_t seed) {
        Rng rng(seed);
        return random_regular(n, degree, rng);
      },
      py::arg("n"), py::arg("degree"), py::arg("seed") = 0);
  m.def("double_cover", &double_cover, py::arg("g"));
  m.def("read_edge_list", &load_edge_list, py::arg("path"));
  m.def("write_edge_list", &save_edge_list, py::arg("path"), py::arg("g"));

  m.def("lambda2", &lambda2, py::arg("g"));
  m.def("effective_resistance", &effective_resistance, py::arg("g"), py::arg("u"), py::arg("v"));
  m.def(
      "all_resistances", [](const WeightedMultigraph& g) { return all_resistances(g).matrix(); }, py::arg("g"));
  m.def(
      "edge_expansion", [](const WeightedMultigraph& g) { return cheeger_bruteforce(g).phi; }, py::arg("g"));

  m.def(
      "matching_decomposition", [](const WeightedMultigraph& g) { return matching_decomposition(g).matchings; },
      py::arg("g"));
  m.def(
      "walecki_decomposition", [](std::size_t n) { return walecki_decomposition(n).cycles; }, py::arg("n"));

  m.def("sparsifier_degree", &sparsifier_degree, py::arg("epsilon"), py::arg("c0") = 3.0);
  m.def(
      "resistance_sparsifier",
      [](const WeightedMultigraph& g, double epsilon, std::uint64_t seed, double c0) {
        Rng rng(seed);
        return sparsifier_dict(resistance_sparsifier(g, epsilon, rng, {c0, nullptr}));
      },
      py::arg("g"), py::arg("epsilon"), py::arg("seed") = 0, py::arg("c0") = 3.0);
  m.def(
      "resistance_sparsifier_with_degree",
      [](const WeightedMultigraph& g, std::size_t d_target, std::uint64_t seed) {
        Rng rng(seed);
        return sparsifier_dict(resistance_sparsifier_with_degree(g, d_target, rng));
      },
      py::arg("g"), py::arg("d_target"), py::arg("seed") = 0);
  m.def(
      "independent_sample_baseline",
      [](const WeightedMultigraph& g, std::size_t edge_budget, std::uint64_t seed) {
        Rng rng(seed);
        return sparsifier_dict(independent_sample_baseline(g, edge_budget, rng));
      },
      py::arg("g"), py::arg("edge_budget"), py::arg("seed") = 0);
  m.def(
      "verify_sparsifier",
      [](const WeightedMultigraph& g, const WeightedMultigraph& h, std::size_t pair_budget, std::uint64_t seed) {
        Rng rng(seed);
        return report_dict(verify_sparsifier(g, h, pair_budget, rng));
      },
      py::arg("g"), py::arg("h"), py::arg("pair_budget") = kDefaultPairBudget, py::arg("seed") = 0);
  m.def(
      "thm9_certificate", [](const WeightedMultigraph& h) { return certificate_dict(thm9_certificate(h)); },
      py::arg("h"));

  m.def(
      "play_game",
      [](const WeightedMultigraph& g, int r, std::uint64_t seed, double round_constant) {
        const GameElements el = game_elements(g);
        const std::size_t n = el.graphs.front().num_vertices();
        if (r == 0) {
          const auto deg = static_cast<int>(std::lround(el.graphs.front().regular_degree()));
          r = deg * static_cast<int>(std::min(el.graphs.size(), 2 * set_cover_sample_count((n + 1) / 2, 0.5)));
        }
        Rng rng(seed);
        const GameResult res = play_game(el.graphs, r, default_round_cap(n, r, round_constant), rng);
        std::vector<double> psi{static_cast<double>(n) - 1.0};
        for (const auto& h : res.state.history()) psi.push_back(h.psi_after);
        py::dict d;
        d["elements"] = el.kind;
        d["r"] = res.r;
        d["round_cap"] = res.round_cap;
        d["rounds"] = res.state.round();
        d["certified"] = res.certified;
        d["certified_expansion"] = res.certified_expansion;
        d["status"] = res.status;
        d["psi"] = psi;
        d["fallback_rounds"] = res.fallback_rounds;
        d["union_graph"] = res.state.union_graph();
        return d;
      },
      py::arg("g"), py::arg("r") = 0, py::arg("seed") = 0, py::arg("round_constant") = 10.0);

  m.def(
      "run_report",
      [](const std::string& command, const std::string& graph, std::uint64_t seed, std::optional<double> epsilon,
         std::optional<std::size_t> d_target, std::size_t trials, std::size_t pairs, double round_constant,
         int weave_degree) {
        const ExperimentConfig cfg =
            make_config(graph, seed, epsilon, d_target, trials, pairs, round_constant, weave_degree);
        RunOutcome out;
        if (command == "decompose") {
          out = run_decompose(cfg);
        } else if (command == "sparsify") {
          out = run_sparsify(cfg);
        } else if (command == "certify") {
          out = run_certify(cfg);
        } else if (command == "resist") {
          out = run_resist(cfg);
        } else if (command == "experiment") {
          out = run_experiment(cfg);
        } else {
          throw ConfigError("unknown command '" + command + "'");
        }
        return dump_json(out.report, -1);
      },
      py::arg("command"), py::arg("graph"), py::arg("seed") = 0, py::arg("epsilon") = py::none(),
      py::arg("d_target") = py::none(), py::arg("trials") = 1, py::arg("pairs") = kDefaultPairBudget,
      py::arg("round_constant") = 10.0, py::arg("weave_degree") = 0);
}
