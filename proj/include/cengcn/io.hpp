#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>

#include "cengcn/graph.hpp"

namespace cengcn {

struct LoadedGraph {
  Graph graph;
  BuildStats stats;
  std::size_t lines_read = 0;
};

/// Reads "u v [w]" lines. `delimiter` of '\0' accepts any whitespace or
/// commas; '#' starts a comment. Original ids are remapped in order of first
/// appearance and kept in Graph::ids().
LoadedGraph load_edge_list(const std::filesystem::path& path, char delimiter = '\0');

/// Writes "u v w" lines using original ids (weights with full precision).
void save_edge_list(const Graph& graph, const std::filesystem::path& path);

/// Maps original id string -> dense vertex index.
std::unordered_map<std::string, Index> id_index(const Graph& graph);

/// Feature rows: "<vertex id> x_1 ... x_m". Every vertex must appear once.
FeatureMatrix load_features(const std::filesystem::path& path, const Graph& graph);

/// Label rows: "<vertex id> <class>". Class tokens are remapped to 0..F-1
/// in sorted order (numeric when all tokens are integers).
LabelVector load_labels(const std::filesystem::path& path, const Graph& graph);

void save_labels(const LabelVector& labels, const Graph& graph, const std::filesystem::path& path);

}  // namespace cengcn
