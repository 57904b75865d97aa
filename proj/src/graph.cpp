#include "cengcn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "cengcn/error.hpp"

namespace cengcn {

Graph::Graph(Index n, std::vector<Edge> edges, BuildStats* stats) : n_(n) {
  if (n < 1) throw DataError("graph must have at least one vertex");
  BuildStats local;

  std::vector<Edge> kept;
  kept.reserve(edges.size());
  std::set<std::pair<Index, Index>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") out of range for n = " + std::to_string(n));
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw DataError("edge weights must be finite and nonnegative");
    }
    if (e.u == e.v) {
      ++local.self_loops_dropped;
      continue;
    }
    const Index a = std::min(e.u, e.v);
    const Index b = std::max(e.u, e.v);
    if (!seen.emplace(a, b).second) {
      ++local.duplicates_dropped;
      continue;
    }
    kept.push_back({a, b, e.weight});
  }
  std::sort(kept.begin(), kept.end(),
            [](const Edge& x, const Edge& y) { return std::pair(x.u, x.v) < std::pair(y.u, y.v); });
  edges_ = std::move(kept);

  std::vector<Index> counts(n, 0);
  for (const Edge& e : edges_) {
    ++counts[e.u];
    ++counts[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (Index i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + counts[i];
  targets_.resize(offsets_[n]);
  weights_.resize(offsets_[n]);
  std::vector<Index> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    targets_[cursor[e.u]] = e.v;
    weights_[cursor[e.u]++] = e.weight;
    targets_[cursor[e.v]] = e.u;
    weights_[cursor[e.v]++] = e.weight;
  }
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<Index, double>> row;
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) row.emplace_back(targets_[k], weights_[k]);
    std::sort(row.begin(), row.end());
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      targets_[k] = row[k - offsets_[i]].first;
      weights_[k] = row[k - offsets_[i]].second;
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(targets_.size());
  for (Index i = 0; i < n; ++i) {
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) triplets.emplace_back(i, targets_[k], weights_[k]);
  }
  adjacency_.resize(n, n);
  adjacency_.setFromTriplets(triplets.begin(), triplets.end());
  adjacency_.makeCompressed();

  degree_ = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Index k = offsets_[i]; k < offsets_[i + 1]; ++k) sum += weights_[k];
    degree_[i] = sum;
  }

  ids_.resize(n);
  for (Index i = 0; i < n; ++i) ids_[i] = std::to_string(i);

  if (stats) *stats = local;
}

std::span<const Index> Graph::neighbors(Index i) const {
  return {targets_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

std::span<const double> Graph::neighbor_weights(Index i) const {
  return {weights_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

bool Graph::has_edge(Index i, Index j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), j);
}

double Graph::weight(Index i, Index j) const {
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return 0.0;
  return neighbor_weights(i)[static_cast<std::size_t>(it - row.begin())];
}

void Graph::set_ids(std::vector<std::string> ids) {
  if (static_cast<Index>(ids.size()) != n_) throw DataError("id list length does not match vertex count");
  ids_ = std::move(ids);
}

Index Graph::component_count() const {
  std::vector<bool> seen(n_, false);
  std::vector<Index> stack;
  Index components = 0;
  for (Index s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index w : neighbors(v)) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

FeatureMatrix identity_features(Index n) { return {Matrix::Identity(n, n)}; }

void LabelVector::validate(Index n) const {
  if (static_cast<Index>(classes.size()) != n) throw DataError("label vector length does not match vertex count");
  for (Index v : labeled) {
    if (v < 0 || v >= n) throw DataError("labeled vertex out of range");
    if (classes[v] < 0 || classes[v] >= num_classes) {
      throw DataError("class id of vertex " + std::to_string(v) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

}  // namespace cengcn
