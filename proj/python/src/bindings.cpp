#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cengcn/centrality.hpp"
#include "cengcn/checkpoint.hpp"
#include "cengcn/error.hpp"
#include "cengcn/eval.hpp"
#include "cengcn/generate.hpp"
#include "cengcn/io.hpp"
#include "cengcn/labelprop.hpp"
#include "cengcn/pipeline.hpp"
#include "cengcn/powerlaw.hpp"
#include "cengcn/transform.hpp"

namespace py = pybind11;
using namespace cengcn;

namespace {

Graph make_graph(Index n, const std::vector<std::tuple<Index, Index, double>>& edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
  return Graph(n, std::move(list));
}

std::vector<std::tuple<Index, Index, double>> edge_tuples(std::span<const Edge> edges) {
  std::vector<std::tuple<Index, Index, double>> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(e.u, e.v, e.weight);
  return out;
}

RunConfig config_from(const py::dict& values) {
  RunConfig c;
  for (const auto& [key, value] : values) c.set(py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
  return c;
}

py::dict stage_dict(const TransformStage& stage) {
  py::dict out;
  out["diagonal"] = stage.adjacency.diagonal;
  out["edges"] = edge_tuples(stage.adjacency.edges);
  if (stage.profile) {
    out["centrality"] = stage.profile->c;
    out["hubs"] = stage.profile->hubs;
    out["fc"] = stage.profile->fc;
  }
  if (stage.labels) out["label_matrix"] = stage.labels->scores;
  if (stage.signs) out["signs"] = stage.signs->sign;
  return out;
}

}  // namespace

PYBIND11_MODULE(_cengcn, m) {
  m.doc() = "Centrality-aware graph convolution (C++ core)";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("n"), py::arg("edges"),
           "Undirected graph from (u, v, weight) tuples; duplicates keep their first weight.")
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("degree", &Graph::degree)
      .def_property_readonly("edges", [](const Graph& g) { return edge_tuples(g.edges()); })
      .def_property_readonly("ids", &Graph::ids)
      .def("neighbors", [](const Graph& g, Index i) {
        const auto n = g.neighbors(i);
        return std::vector<Index>(n.begin(), n.end());
      })
      .def("component_count", &Graph::component_count)
      .def("adjacency", [](const Graph& g) { return Matrix(g.adjacency()); }, "Dense copy of the adjacency.");

  m.def("load_edge_list", [](const std::string& path) { return load_edge_list(path).graph; }, py::arg("path"));
  m.def("generate_scale_free", &generate_scale_free, py::arg("n"), py::arg("m_attach"), py::arg("seed"));
  m.def(
      "generate_planted",
      [](Index n, Index m_attach, Index communities, double mixing, Seed seed) {
        PlantedGraph p = generate_planted_scale_free(n, m_attach, communities, mixing, seed);
        return py::make_tuple(std::move(p.graph), p.labels.classes);
      },
      py::arg("n"), py::arg("m_attach"), py::arg("communities"), py::arg("mixing"), py::arg("seed"),
      "Returns (graph, class per vertex).");

  m.def("degree_centrality", &degree_centrality);
  m.def(
      "eigenvector_centrality",
      [](const Graph& g, double tol, int max_iter) { return eigenvector_centrality(g, {tol, max_iter}); },
      py::arg("graph"), py::arg("tol") = 1e-10, py::arg("max_iter") = 10000);
  m.def("hub_count", &hub_count, py::arg("n"), py::arg("rate_percent"));
  m.def("select_hubs", &select_hubs, py::arg("c"), py::arg("rate_percent"));

  m.def("transition_matrix", [](const Graph& g) { return Matrix(transition_matrix(g)); });
  m.def(
      "propagate",
      [](const Graph& g, const std::vector<Index>& hubs, int steps) {
        return propagate(transition_matrix(g), hubs, steps).scores;
      },
      py::arg("graph"), py::arg("hubs"), py::arg("steps") = 5, "Hub label scores after `steps` walk steps.");
  m.def(
      "similarity_sign",
      [](const Graph& g, const std::vector<Index>& hubs, int steps) {
        return similarity_sign(g, propagate(transition_matrix(g), hubs, steps)).sign;
      },
      py::arg("graph"), py::arg("hubs"), py::arg("steps") = 5, "Per-edge sign, aligned with Graph.edges.");

  m.def(
      "transform",
      [](const Graph& g, const py::dict& config) { return stage_dict(run_transform(g, config_from(config).resolved())); },
      py::arg("graph"), py::arg("config") = py::dict(),
      "Centrality, propagation and reweighting. `config` maps 'section.key' to values.");

  m.def(
      "run",
      [](const py::dict& config, bool keep_embeddings) {
        const PreparedRun prepared = prepare_run(config_from(config));
        const TrainResult trained = train_run(prepared);
        const EvalReport report = evaluate_run(prepared, trained.model, prepared.config.task);
        py::dict out;
        out["task"] = std::string(to_string(report.task));
        out["metric"] = report.metric_name;
        out["value"] = report.metric_value;
        out["best_iteration"] = trained.best_iteration;
        std::vector<double> loss;
        for (const HistoryRow& row : trained.history) loss.push_back(row.train_loss);
        out["train_loss"] = loss;
        out["config"] = report.config_text;
        if (keep_embeddings) out["embeddings"] = report.embeddings;
        if (!report.assignment.empty()) out["assignment"] = report.assignment;
        return out;
      },
      py::arg("config") = py::dict(), py::arg("keep_embeddings") = false,
      "Train and evaluate one configuration; returns the metric and loss history.");

  m.def("config_keys", &RunConfig::keys);
  m.def(
      "resolve_config", [](const py::dict& config) { return config_from(config).resolved().to_text(); },
      py::arg("config") = py::dict(), "Resolved config as text; raises ConfigError on invalid values.");

  m.def(
      "accuracy",
      [](const Matrix& predictions, const std::vector<Index>& classes, const std::vector<Index>& indices) {
        return accuracy(predictions, classes, indices);
      },
      py::arg("predictions"), py::arg("classes"), py::arg("indices"));
  m.def(
      "auc", [](const std::vector<double>& scores, const std::vector<int>& labels) { return auc(scores, labels); },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "nmi", [](const std::vector<Index>& a, const std::vector<Index>& b) { return nmi(a, b); }, py::arg("a"),
      py::arg("b"));
  m.def(
      "power_law_alpha",
      [](const std::vector<double>& degrees, std::optional<double> d_min) {
        return d_min ? estimate_power_law_alpha(degrees, *d_min) : estimate_power_law_alpha(degrees);
      },
      py::arg("degrees"), py::arg("d_min") = std::nullopt);
}
