#include "cengcn/generate.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "cengcn/error.hpp"

namespace cengcn {
namespace {

void check_attachment(Index n, Index m_attach) {
  if (m_attach < 1) throw ConfigError("m_attach must be >= 1");
  if (n <= m_attach) {
    throw ConfigError("scale-free generator needs n > m_attach (n = " + std::to_string(n) +
                      ", m_attach = " + std::to_string(m_attach) + ")");
  }
}

Index pick(const std::vector<Index>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
  return pool[dist(rng)];
}

}  // namespace

Graph generate_scale_free(Index n, Index m_attach, Seed seed) {
  check_attachment(n, m_attach);
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  // Every edge endpoint appears once, so a uniform draw is degree-proportional.
  std::vector<Index> endpoints;
  for (Index i = 0; i <= m_attach; ++i) {
    for (Index j = i + 1; j <= m_attach; ++j) {
      edges.push_back({i, j, 1.0});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<Index> targets;
  for (Index v = m_attach + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<Index>(targets.size()) < m_attach) {
      const Index t = pick(endpoints, rng);
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Index t : targets) {
      edges.push_back({t, v, 1.0});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, std::move(edges));
}

PlantedGraph generate_planted_scale_free(Index n, Index m_attach, Index communities, double mixing,
                                         Seed seed) {
  check_attachment(n, m_attach);
  if (communities < 1) throw ConfigError("communities must be >= 1");
  if (!(mixing >= 0.0 && mixing <= 1.0)) throw ConfigError("mixing must lie in [0, 1]");
  if (n < communities * (m_attach + 1)) {
    throw ConfigError("planted generator needs n >= communities * (m_attach + 1)");
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution cross(mixing);
  std::vector<std::vector<Index>> members(communities);
  std::vector<std::vector<Index>> endpoints(communities);
  std::vector<Index> all_endpoints;
  std::vector<Edge> edges;
  std::vector<Index> community(n);

  auto link = [&](Index a, Index b) {
    edges.push_back({a, b, 1.0});
    endpoints[community[a]].push_back(a);
    endpoints[community[b]].push_back(b);
    all_endpoints.push_back(a);
    all_endpoints.push_back(b);
  };

  std::vector<Index> targets;
  for (Index v = 0; v < n; ++v) {
    const Index c = v % communities;
    community[v] = c;
    if (static_cast<Index>(members[c].size()) <= m_attach) {
      for (Index u : members[c]) link(u, v);
      members[c].push_back(v);
      continue;
    }
    targets.clear();
    while (static_cast<Index>(targets.size()) < m_attach) {
      Index t = -1;
      if (communities > 1 && cross(rng)) {
        do {
          t = pick(all_endpoints, rng);
        } while (community[t] == c);
      } else {
        t = pick(endpoints[c], rng);
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Index t : targets) link(t, v);
    members[c].push_back(v);
  }

  PlantedGraph out{Graph(n, std::move(edges)), {}};
  out.labels.classes = community;
  out.labels.num_classes = communities;
  out.labels.labeled.resize(n);
  for (Index v = 0; v < n; ++v) out.labels.labeled[v] = v;
  return out;
}

}  // namespace cengcn
