#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cengcn/types.hpp"

namespace cengcn {

/// Undirected weighted edge with u < v after normalization.
struct Edge {
  Index u = 0;
  Index v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Counts of input records discarded while building a Graph.
struct BuildStats {
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

/// Immutable undirected weighted graph over vertices 0..n-1.
///
/// Edges are stored once each (u < v), sorted lexicographically. The
/// adjacency is kept both as CSR neighbor lists (sorted per row) and as an
/// Eigen sparse matrix for products. Input graphs never carry self-loops;
/// duplicates (in either orientation) keep their first weight.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from raw (possibly unordered, duplicated) edges.
  /// Throws DataError on n < 1, out-of-range endpoints or negative weights.
  Graph(Index n, std::vector<Edge> edges, BuildStats* stats = nullptr);

  Index num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const SparseMatrix& adjacency() const noexcept { return adjacency_; }

  /// D_ii = sum_j A_ij, accumulated in CSR order.
  const Vector& degree() const noexcept { return degree_; }

  std::span<const Index> neighbors(Index i) const;
  std::span<const double> neighbor_weights(Index i) const;
  Index neighbor_count(Index i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_edge(Index i, Index j) const;
  double weight(Index i, Index j) const;  // 0 when absent

  /// Original vertex labels (defaults to "0".."n-1").
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  void set_ids(std::vector<std::string> ids);

  /// Number of connected components (isolated vertices count).
  Index component_count() const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_{0};
  std::vector<Index> targets_;
  std::vector<double> weights_;
  SparseMatrix adjacency_;
  Vector degree_;
  std::vector<std::string> ids_;
};

/// Dense n x m node features.
struct FeatureMatrix {
  Matrix values;

  Index rows() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

FeatureMatrix identity_features(Index n);

/// Class ids per vertex plus the set of vertices that carry a label.
struct LabelVector {
  std::vector<Index> classes;  // length n; unlabeled entries are -1
  Index num_classes = 0;
  std::vector<Index> labeled;  // sorted ascending

  /// Throws DataError when a labeled id is out of [0, num_classes).
  void validate(Index n) const;
};

}  // namespace cengcn
