#include "cengcn/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cengcn/error.hpp"
#include "cengcn/io.hpp"
#include "text_util.hpp"

namespace cengcn {

std::string_view to_string(WeightBranch branch) {
  switch (branch) {
    case WeightBranch::by_sign: return "by_sign";
    case WeightBranch::increase_only: return "increase_only";
    case WeightBranch::decrease_only: return "decrease_only";
  }
  return "?";
}

void check_exponents(double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p must be > 0, got " + std::to_string(p));
  if (!(q < 0.0) || !std::isfinite(q)) throw ConfigError("q must be < 0, got " + std::to_string(q));
}

double f_B(double a, double fc_i, double fc_j, int sign, double p, double q) {
  check_exponents(p, q);
  if (sign != 1 && sign != -1) throw DataError("similarity sign must be +1 or -1");
  const double e = sign == 1 ? p : q;
  return a * std::pow(fc_i, e) * std::pow(fc_j, e);
}

SparseMatrix TransformedAdjacency::matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size() + static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) triplets.emplace_back(i, i, diagonal[i]);
  for (const Edge& e : edges) {
    triplets.emplace_back(e.u, e.v, e.weight);
    triplets.emplace_back(e.v, e.u, e.weight);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

TransformedAdjacency transform_graph(const Graph& graph, const CentralityProfile& profile,
                                     const SimilaritySign& signs, double p, double q, WeightBranch branch) {
  check_exponents(p, q);
  const Index n = graph.num_vertices();
  if (profile.num_vertices() != n || profile.fc.size() != n) {
    throw DataError("centrality profile has " + std::to_string(profile.num_vertices()) +
                    " vertices, graph has " + std::to_string(n));
  }
  if (signs.sign.size() != graph.num_edges()) {
    throw DataError("similarity signs cover " + std::to_string(signs.sign.size()) + " edges, graph has " +
                    std::to_string(graph.num_edges()));
  }

  TransformedAdjacency out;
  out.n = n;
  out.p = p;
  out.q = q;
  out.branch = branch;
  out.diagonal = profile.fc;
  const auto edges = graph.edges();
  out.edges.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    int sign = signs[k];
    if (branch == WeightBranch::increase_only) sign = 1;
    if (branch == WeightBranch::decrease_only) sign = -1;
    const double w = f_B(e.weight, profile.fc[e.u], profile.fc[e.v], sign, p, q);
    out.edges.push_back({e.u, e.v, std::max(w, kMinEdgeWeight)});
  }
  return out;
}

TransformedAdjacency self_loop_adjacency(const Graph& graph) {
  TransformedAdjacency out;
  out.n = graph.num_vertices();
  out.diagonal = Vector::Ones(out.n);
  out.edges.assign(graph.edges().begin(), graph.edges().end());
  for (Edge& e : out.edges) e.weight = std::max(e.weight, kMinEdgeWeight);
  return out;
}

void save_transformed(const TransformedAdjacency& adjacency, const Graph& graph,
                      const std::filesystem::path& edges_path, const std::filesystem::path& diagonal_path) {
  const auto& ids = graph.ids();
  auto out = detail::open_output(edges_path);
  for (const Edge& e : adjacency.edges) {
    out << ids[e.u] << ' ' << ids[e.v] << ' ' << detail::format_double(e.weight) << '\n';
  }
  detail::finish_output(out, edges_path);
  auto diag = detail::open_output(diagonal_path);
  for (Index i = 0; i < adjacency.n; ++i) diag << ids[i] << ' ' << detail::format_double(adjacency.diagonal[i]) << '\n';
  detail::finish_output(diag, diagonal_path);
}

TransformedAdjacency load_transformed(const Graph& graph, const std::filesystem::path& edges_path,
                                      const std::filesystem::path& diagonal_path) {
  const auto index = id_index(graph);
  const Index n = graph.num_vertices();
  TransformedAdjacency out;
  out.n = n;

  const LoadedGraph weighted = load_edge_list(edges_path);
  if (weighted.graph.num_edges() != graph.num_edges()) {
    throw DataError(edges_path.string() + ": edge count differs from the source graph");
  }
  std::vector<Edge> remapped;
  for (const Edge& e : weighted.graph.edges()) {
    const auto u = index.find(weighted.graph.ids()[e.u]);
    const auto v = index.find(weighted.graph.ids()[e.v]);
    if (u == index.end() || v == index.end() || !graph.has_edge(u->second, v->second)) {
      throw DataError(edges_path.string() + ": edge not present in the source graph");
    }
    remapped.push_back({u->second, v->second, e.weight});
  }
  // Align with the source graph's edge order.
  const Graph aligned(n, std::move(remapped));
  out.edges.assign(aligned.edges().begin(), aligned.edges().end());

  out.diagonal = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  auto in = detail::open_input(diagonal_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    const auto it = tokens.size() == 2 ? index.find(std::string(tokens[0])) : index.end();
    const auto value = tokens.size() == 2 ? detail::parse_double(tokens[1]) : std::nullopt;
    if (it == index.end() || !value) throw DataError(detail::where(diagonal_path, line_no) + ": expected 'id weight'");
    out.diagonal[it->second] = *value;
  }
  if (!out.diagonal.allFinite()) throw DataError(diagonal_path.string() + ": diagonal does not cover every vertex");
  return out;
}

}  // namespace cengcn
