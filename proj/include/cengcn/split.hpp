#pragma once

#include <utility>
#include <vector>

#include "cengcn/graph.hpp"

namespace cengcn {

struct DataSplit {
  std::vector<Index> train;
  std::vector<Index> validation;
  std::vector<Index> test;
};

/// Shuffles the labeled vertices and cuts floor(frac * count) for train and
/// validation; the remainder is test.
DataSplit split_vertices(const LabelVector& labels, double train_frac = 0.10,
                         double val_frac = 0.10, Seed seed = 0);

using VertexPair = std::pair<Index, Index>;

struct LinkSplit {
  Graph residual;
  std::vector<VertexPair> positives;
  std::vector<VertexPair> negatives;
};

/// Hides floor(hide_frac * |E|) edges and samples as many non-edges.
LinkSplit sample_link_split(const Graph& graph, double hide_frac, Seed seed);

/// Uniform non-edges of `graph`, excluding anything in `exclude` and each
/// other. Rejection sampling with at most 100 * count draws.
std::vector<VertexPair> sample_non_edges(const Graph& graph, std::size_t count, Seed seed,
                                         const std::vector<VertexPair>& exclude = {});

}  // namespace cengcn
