#include "cengcn/labelprop.hpp"

#include <algorithm>
#include <string>

#include "cengcn/error.hpp"
#include "text_util.hpp"

namespace cengcn {

SparseMatrix transition_matrix(const Graph& graph) {
  const Index n = graph.num_vertices();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * graph.num_edges());
  for (Index i = 0; i < n; ++i) {
    const double d = graph.degree()[i];
    if (d <= 0.0) continue;
    const auto nbrs = graph.neighbors(i);
    const auto weights = graph.neighbor_weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) triplets.emplace_back(i, nbrs[k], weights[k] / d);
  }
  SparseMatrix p(n, n);
  p.setFromTriplets(triplets.begin(), triplets.end());
  p.makeCompressed();
  return p;
}

LabelMatrix propagate(const SparseMatrix& transition, const std::vector<Index>& hubs, int steps) {
  if (steps < 1) throw ConfigError("propagation steps must be >= 1");
  if (hubs.empty()) throw ConfigError("label propagation needs at least one hub");
  const Index n = transition.rows();
  LabelMatrix out;
  out.steps = steps;
  out.hubs = hubs;
  out.column_of.assign(n, -1);
  Matrix labels = Matrix::Zero(n, static_cast<Index>(hubs.size()));
  for (std::size_t k = 0; k < hubs.size(); ++k) {
    const Index h = hubs[k];
    if (h < 0 || h >= n) throw DataError("hub index out of range");
    if (out.column_of[h] >= 0) throw DataError("duplicate hub " + std::to_string(h));
    out.column_of[h] = static_cast<Index>(k);
    labels(h, static_cast<Index>(k)) = 1.0;
  }
  for (int t = 0; t < steps; ++t) {
    Matrix next = transition * labels;
    labels = std::move(next);
  }
  out.scores = std::move(labels);
  return out;
}

Index hub_rank(const LabelMatrix& labels, Index row, Index column) {
  const auto scores = labels.scores.row(row);
  const double target = scores[column];
  Index rank = 1;
  for (Index k = 0; k < scores.size(); ++k) {
    if (scores[k] > target || (scores[k] == target && k < column)) ++rank;
  }
  return rank;
}

SimilaritySign similarity_sign(const Graph& graph, const LabelMatrix& labels) {
  const Index n = graph.num_vertices();
  if (labels.scores.rows() != n) throw DataError("label matrix does not match graph size");

  std::vector<Index> hub_neighbors(n, 0);
  for (Index i = 0; i < n; ++i) {
    for (Index j : graph.neighbors(i)) {
      if (labels.column_of[j] >= 0) ++hub_neighbors[i];
    }
  }
  auto one_sided = [&](Index i, Index j) {
    const Index column = labels.column_of[j];
    if (column < 0) return 1;
    return hub_rank(labels, i, column) <= hub_neighbors[i] ? 1 : -1;
  };

  SimilaritySign out;
  out.sign.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) out.sign.push_back(std::min(one_sided(e.u, e.v), one_sided(e.v, e.u)));
  return out;
}

void save_label_matrix(const LabelMatrix& labels, const Graph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "# steps " << labels.steps << " hubs";
  for (Index h : labels.hubs) out << ' ' << graph.ids()[h];
  out << '\n';
  for (Index i = 0; i < labels.scores.rows(); ++i) {
    out << graph.ids()[i];
    for (Index k = 0; k < labels.scores.cols(); ++k) out << ' ' << detail::format_double(labels.scores(i, k));
    out << '\n';
  }
  detail::finish_output(out, path);
}

void save_signs(const SimilaritySign& signs, const Graph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  const auto edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    out << graph.ids()[edges[k].u] << ' ' << graph.ids()[edges[k].v] << ' ' << signs[k] << '\n';
  }
  detail::finish_output(out, path);
}

}  // namespace cengcn
