#pragma once

#include <filesystem>
#include <vector>

#include "cengcn/graph.hpp"

namespace cengcn {

/// Random-walk transition matrix P = D^{-1} A. Rows of isolated vertices are zero.
SparseMatrix transition_matrix(const Graph& graph);

/// Hub label scores after t propagation steps: L^t = P^t L_0, with L_0 the
/// one-hot hub indicator (column k belongs to hubs[k]).
struct LabelMatrix {
  Matrix scores;  // n x |hubs|
  int steps = 0;
  std::vector<Index> hubs;
  std::vector<Index> column_of;  // vertex -> hub column, -1 for non-hubs

  Index hub_column(Index vertex) const { return column_of[vertex]; }
};

/// Throws ConfigError for steps < 1. `hubs` must be distinct valid vertices.
LabelMatrix propagate(const SparseMatrix& transition, const std::vector<Index>& hubs, int steps = 5);

/// 1-based position of hub column `column` in row `row` sorted by decreasing
/// score; equal scores rank the lower column first.
Index hub_rank(const LabelMatrix& labels, Index row, Index column);

/// Per-edge similarity sign, aligned with graph.edges().
struct SimilaritySign {
  std::vector<int> sign;  // +1 or -1

  int operator[](std::size_t edge) const { return sign[edge]; }
};

/// f_S(i,j) = min(f_S'(i,j), f_S'(j,i)) where f_S'(i,j) = -1 only when j is
/// a hub whose rank in row i exceeds the number of hub neighbors of i.
SimilaritySign similarity_sign(const Graph& graph, const LabelMatrix& labels);

/// "id s_1 ... s_H" per line.
void save_label_matrix(const LabelMatrix& labels, const Graph& graph,
                       const std::filesystem::path& path);
/// "i j sign" per edge.
void save_signs(const SimilaritySign& signs, const Graph& graph, const std::filesystem::path& path);

}  // namespace cengcn
