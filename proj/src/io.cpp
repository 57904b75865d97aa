#include "cengcn/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cengcn/log.hpp"
#include "text_util.hpp"

namespace cengcn {

using detail::tokenize;
using detail::where;

LoadedGraph load_edge_list(const std::filesystem::path& path, char delimiter) {
  auto in = detail::open_input(path);
  std::unordered_map<std::string, Index> index;
  std::vector<std::string> ids;
  std::vector<Edge> edges;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = index.try_emplace(std::string(token), static_cast<Index>(ids.size()));
    if (inserted) ids.emplace_back(token);
    return it->second;
  };

  LoadedGraph out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line, delimiter);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw DataError(where(path, line_no) + ": expected 'u v [weight]', got " +
                      std::to_string(tokens.size()) + " fields");
    }
    if (tokens[0].empty() || tokens[1].empty()) throw DataError(where(path, line_no) + ": empty vertex id");
    double weight = 1.0;
    if (tokens.size() == 3) {
      const auto parsed = detail::parse_double(tokens[2]);
      if (!parsed || !(*parsed >= 0.0)) {
        throw DataError(where(path, line_no) + ": invalid weight '" + std::string(tokens[2]) + "'");
      }
      weight = *parsed;
    }
    const Index u = intern(tokens[0]);
    const Index v = intern(tokens[1]);
    edges.push_back({u, v, weight});
  }
  out.lines_read = line_no;
  if (ids.empty()) throw DataError(path.string() + ": no edges found");

  out.graph = Graph(static_cast<Index>(ids.size()), std::move(edges), &out.stats);
  out.graph.set_ids(std::move(ids));
  if (out.stats.self_loops_dropped > 0) {
    log::warn(path.string() + ": dropped " + std::to_string(out.stats.self_loops_dropped) + " self-loop(s)");
  }
  return out;
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  const auto& ids = graph.ids();
  for (const Edge& e : graph.edges()) {
    out << ids[e.u] << ' ' << ids[e.v] << ' ' << detail::format_double(e.weight) << '\n';
  }
  detail::finish_output(out, path);
}

std::unordered_map<std::string, Index> id_index(const Graph& graph) {
  std::unordered_map<std::string, Index> index;
  const auto& ids = graph.ids();
  for (Index i = 0; i < graph.num_vertices(); ++i) index.emplace(ids[i], i);
  return index;
}

FeatureMatrix load_features(const std::filesystem::path& path, const Graph& graph) {
  auto in = detail::open_input(path);
  const auto index = id_index(graph);
  const Index n = graph.num_vertices();
  std::vector<std::vector<double>> rows(n);
  std::vector<bool> seen(n, false);
  Index dim = -1;
  Index count = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const auto it = index.find(std::string(tokens[0]));
    if (it == index.end()) {
      throw DataError(where(path, line_no) + ": unknown vertex id '" + std::string(tokens[0]) + "'");
    }
    const Index row_dim = static_cast<Index>(tokens.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim || dim == 0) {
      throw DataError(where(path, line_no) + ": expected " + std::to_string(dim) + " feature values");
    }
    if (seen[it->second]) throw DataError(where(path, line_no) + ": duplicate feature row");
    seen[it->second] = true;
    auto& row = rows[it->second];
    row.reserve(dim);
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto value = detail::parse_double(tokens[k]);
      if (!value || !std::isfinite(*value)) {
        throw DataError(where(path, line_no) + ": invalid feature value '" + std::string(tokens[k]) + "'");
      }
      row.push_back(*value);
    }
    ++count;
  }
  if (count != n) {
    throw DataError(path.string() + ": " + std::to_string(count) + " feature rows for " +
                    std::to_string(n) + " vertices");
  }
  FeatureMatrix features{Matrix(n, dim)};
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < dim; ++k) features.values(i, k) = rows[i][k];
  }
  return features;
}

LabelVector load_labels(const std::filesystem::path& path, const Graph& graph) {
  auto in = detail::open_input(path);
  const auto index = id_index(graph);
  std::vector<std::pair<Index, std::string>> raw;
  std::string line;
  std::size_t line_no = 0;
  std::size_t unknown = 0;
  std::vector<bool> seen(graph.num_vertices(), false);
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw DataError(where(path, line_no) + ": expected 'vertex class'");
    const auto it = index.find(std::string(tokens[0]));
    if (it == index.end()) {
      ++unknown;
      continue;
    }
    if (seen[it->second]) throw DataError(where(path, line_no) + ": duplicate label");
    seen[it->second] = true;
    raw.emplace_back(it->second, std::string(tokens[1]));
  }
  if (unknown > 0) {
    log::warn(path.string() + ": skipped " + std::to_string(unknown) + " label(s) for vertices absent from the graph");
  }
  if (raw.empty()) throw DataError(path.string() + ": no labels for graph vertices");

  const bool numeric = std::all_of(raw.begin(), raw.end(),
                                   [](const auto& r) { return detail::parse_int(r.second).has_value(); });
  auto less = [numeric](const std::string& a, const std::string& b) {
    if (numeric) return *detail::parse_int(a) < *detail::parse_int(b);
    return a < b;
  };
  std::map<std::string, Index, decltype(less)> class_ids(less);
  for (const auto& r : raw) class_ids.emplace(r.second, 0);
  Index next = 0;
  for (auto& [name, id] : class_ids) id = next++;

  LabelVector labels;
  labels.classes.assign(graph.num_vertices(), -1);
  labels.num_classes = next;
  for (const auto& [v, name] : raw) {
    labels.classes[v] = class_ids.at(name);
    labels.labeled.push_back(v);
  }
  std::sort(labels.labeled.begin(), labels.labeled.end());
  return labels;
}

void save_labels(const LabelVector& labels, const Graph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (Index v : labels.labeled) out << graph.ids()[v] << ' ' << labels.classes[v] << '\n';
  detail::finish_output(out, path);
}

}  // namespace cengcn
