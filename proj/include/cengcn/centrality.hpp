#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "cengcn/graph.hpp"

namespace cengcn {

enum class CentralityMeasure { degree, eigenvector };

std::string_view to_string(CentralityMeasure measure);
CentralityMeasure parse_centrality(std::string_view text);

/// Centrality indices with the hub set derived from them.
///
/// Invariants: c[i] >= 1; hubs are the top max(1, floor(n * r / 100)) vertices
/// by c (ties: lower id first), stored in ascending vertex order;
/// f_C[i] = c[i] for hubs, 1 otherwise.
struct CentralityProfile {
  CentralityMeasure measure = CentralityMeasure::degree;
  double rate_percent = 0.0;
  Vector c;
  std::vector<Index> hubs;
  std::vector<bool> is_hub;
  Vector fc;

  Index num_vertices() const { return c.size(); }
  double f_C(Index i) const { return fc[i]; }
};

/// c[i] = D_ii, floored at 1 (isolated vertices get 1).
Vector degree_centrality(const Graph& graph);

struct EigenvectorOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Dominant adjacency eigenvector by power iteration, normalized so that
/// min c = 1. Iterates on A + I (same eigenvectors, and the dominant
/// eigenvalue is strictly dominant in magnitude for connected graphs, which
/// bipartite graphs otherwise violate). Stops when successive max-normalized
/// iterates differ by < tol in max norm and the eigen-residual is < tol.
/// Throws DataError for disconnected graphs and NumericError on
/// non-convergence.
Vector eigenvector_centrality(const Graph& graph, const EigenvectorOptions& options = {});

Index hub_count(Index n, double rate_percent);

/// Top-ranked vertices by c, returned in ascending id order.
std::vector<Index> select_hubs(const Vector& c, double rate_percent);

/// Computes c with the given measure and derives hubs and f_C.
/// `rate_percent` must lie in (0, 100).
CentralityProfile make_profile(const Graph& graph, CentralityMeasure measure, double rate_percent,
                               const EigenvectorOptions& options = {});

/// Builds a profile from precomputed indices.
CentralityProfile make_profile(Vector c, CentralityMeasure measure, double rate_percent);

/// "id c is_hub" per line, original ids.
void save_profile(const CentralityProfile& profile, const Graph& graph,
                  const std::filesystem::path& path);
CentralityProfile load_profile(const std::filesystem::path& path, const Graph& graph,
                               CentralityMeasure measure, double rate_percent);

}  // namespace cengcn
