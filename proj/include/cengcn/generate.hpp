#pragma once

#include "cengcn/graph.hpp"
#include "cengcn/types.hpp"

namespace cengcn {

/// Preferential attachment: a seed clique on m_attach + 1 vertices, then each
/// new vertex links to m_attach distinct existing vertices chosen with
/// probability proportional to degree. Deterministic for a given seed.
Graph generate_scale_free(Index n, Index m_attach, Seed seed);

struct PlantedGraph {
  Graph graph;
  LabelVector labels;
};

/// Scale-free graph with planted communities. Vertices are assigned to
/// communities round-robin; every seed clique is intra-community, and each
/// attachment stays inside the newcomer's community with probability
/// 1 - mixing (preferential within that community) or otherwise goes to
/// another community (preferential over the whole graph).
PlantedGraph generate_planted_scale_free(Index n, Index m_attach, Index communities,
                                         double mixing, Seed seed);

}  // namespace cengcn
