#include "cengcn/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "cengcn/error.hpp"

namespace cengcn {
namespace {

// floor(frac * count) that tolerates fractions like 0.1 * 100 = 10.000000000000002.
std::size_t fraction_of(double frac, std::size_t count) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(count) + 1e-9));
}

VertexPair ordered(Index a, Index b) { return a < b ? VertexPair{a, b} : VertexPair{b, a}; }

}  // namespace

DataSplit split_vertices(const LabelVector& labels, double train_frac, double val_frac, Seed seed) {
  if (train_frac < 0.0 || val_frac < 0.0 || !(train_frac + val_frac < 1.0)) {
    throw ConfigError("split fractions must be nonnegative with train_frac + val_frac < 1");
  }
  if (labels.labeled.empty()) throw DataError("cannot split: no labeled vertices");

  std::vector<Index> order = labels.labeled;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n_train = fraction_of(train_frac, order.size());
  const std::size_t n_val = fraction_of(val_frac, order.size());
  if (n_train == 0) {
    throw ConfigError("train split is empty (train_frac = " + std::to_string(train_frac) + ", " +
                      std::to_string(order.size()) + " labeled vertices)");
  }

  DataSplit split;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<VertexPair> sample_non_edges(const Graph& graph, std::size_t count, Seed seed,
                                         const std::vector<VertexPair>& exclude) {
  const Index n = graph.num_vertices();
  std::set<VertexPair> taken;
  for (const auto& [a, b] : exclude) taken.insert(ordered(a, b));

  std::size_t excluded_non_edges = 0;
  for (const auto& [a, b] : taken) {
    if (a != b && !graph.has_edge(a, b)) ++excluded_non_edges;
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double available =
      pairs - static_cast<double>(graph.num_edges()) - static_cast<double>(excluded_non_edges);
  if (available < static_cast<double>(count)) {
    throw DataError("graph too dense to sample " + std::to_string(count) + " non-edges: short by " +
                    std::to_string(static_cast<long long>(static_cast<double>(count) - available)));
  }

  std::vector<VertexPair> out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> vertex(0, n - 1);
  const std::size_t max_draws = 100 * count;
  for (std::size_t draws = 0; out.size() < count; ++draws) {
    if (draws >= max_draws) {
      throw DataError("non-edge sampling gave up after " + std::to_string(max_draws) +
                      " draws: short by " + std::to_string(count - out.size()));
    }
    const Index a = vertex(rng);
    const Index b = vertex(rng);
    if (a == b || graph.has_edge(a, b)) continue;
    const VertexPair pair = ordered(a, b);
    if (!taken.insert(pair).second) continue;
    out.push_back(pair);
  }
  return out;
}

LinkSplit sample_link_split(const Graph& graph, double hide_frac, Seed seed) {
  if (!(hide_frac > 0.0 && hide_frac < 1.0)) throw ConfigError("hide_frac must lie in (0, 1)");
  const auto edges = graph.edges();
  const std::size_t hidden = fraction_of(hide_frac, edges.size());

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  LinkSplit split;
  std::vector<Edge> kept;
  kept.reserve(edges.size() - hidden);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Edge& e = edges[order[k]];
    if (k < hidden) {
      split.positives.emplace_back(e.u, e.v);
    } else {
      kept.push_back(e);
    }
  }
  std::sort(split.positives.begin(), split.positives.end());
  split.negatives = sample_non_edges(graph, hidden, rng());
  split.residual = Graph(graph.num_vertices(), std::move(kept));
  split.residual.set_ids(graph.ids());
  return split;
}

}  // namespace cengcn
