#pragma once

#include <filesystem>
#include <string_view>

#include "cengcn/centrality.hpp"
#include "cengcn/graph.hpp"
#include "cengcn/labelprop.hpp"

namespace cengcn {

/// Which f_B branch is applied to each edge.
enum class WeightBranch { by_sign, increase_only, decrease_only };

std::string_view to_string(WeightBranch branch);

/// Smallest off-diagonal weight kept after reweighting.
inline constexpr double kMinEdgeWeight = 1e-12;

/// Throws ConfigError unless p > 0 and q < 0.
void check_exponents(double p, double q);

/// a * fc_i^p * fc_j^p for sign +1, a * fc_i^q * fc_j^q for sign -1.
double f_B(double a, double fc_i, double fc_j, int sign, double p, double q);

/// Reweighted adjacency with centrality self-connections.
///
/// Off-diagonal pattern equals the source graph's; diag[i] = f_C(v_i).
struct TransformedAdjacency {
  Index n = 0;
  Vector diagonal;
  std::vector<Edge> edges;  // aligned with the source graph's edges
  double p = 1.0;
  double q = -1.0;
  WeightBranch branch = WeightBranch::by_sign;

  /// Symmetric sparse matrix with sorted columns, diagonal included.
  SparseMatrix matrix() const;
};

TransformedAdjacency transform_graph(const Graph& graph, const CentralityProfile& profile,
                                     const SimilaritySign& signs, double p, double q,
                                     WeightBranch branch = WeightBranch::by_sign);

/// A + I, i.e. the transform with f_C identically 1.
TransformedAdjacency self_loop_adjacency(const Graph& graph);

/// Weighted edge list "u v w" and diagonal "i w", original ids.
void save_transformed(const TransformedAdjacency& adjacency, const Graph& graph,
                      const std::filesystem::path& edges_path,
                      const std::filesystem::path& diagonal_path);
TransformedAdjacency load_transformed(const Graph& graph, const std::filesystem::path& edges_path,
                                      const std::filesystem::path& diagonal_path);

}  // namespace cengcn
