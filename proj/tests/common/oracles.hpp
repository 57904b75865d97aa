#pragma once

// Independent reference computations shared by unit and acceptance tests.
// Written with plain loops so they do not reuse library code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cengcn/gcn.hpp"
#include "cengcn/graph.hpp"

namespace cengcn::testing {

inline Matrix one_hot_hubs(Index n, const std::vector<Index>& hubs) {
  Matrix l0 = Matrix::Zero(n, static_cast<Index>(hubs.size()));
  for (std::size_t k = 0; k < hubs.size(); ++k) l0(hubs[k], static_cast<Index>(k)) = 1.0;
  return l0;
}

/// Explicit dense P^t, then P^t L_0.
inline Matrix matrix_power_oracle(const Graph& g, const std::vector<Index>& hubs, int t) {
  const Index n = g.num_vertices();
  Matrix p = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    p(e.u, e.v) = e.weight;
    p(e.v, e.u) = e.weight;
  }
  for (Index i = 0; i < n; ++i) {
    const double d = p.row(i).sum();
    if (d > 0) p.row(i) /= d;
  }
  Matrix power = Matrix::Identity(n, n);
  for (int s = 0; s < t; ++s) power = power * p;
  return power * one_hot_hubs(n, hubs);
}

/// Fraction of `walks` unweighted random walks from each start that end on each hub after t steps.
inline Matrix monte_carlo_oracle(const Graph& g, const std::vector<Index>& hubs, int t, long walks, Seed seed) {
  std::mt19937_64 rng(seed);
  const Index n = g.num_vertices();
  std::vector<Index> column(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < hubs.size(); ++k) column[hubs[k]] = static_cast<Index>(k);
  Matrix counts = Matrix::Zero(n, static_cast<Index>(hubs.size()));
  for (Index start = 0; start < n; ++start) {
    for (long w = 0; w < walks; ++w) {
      Index v = start;
      for (int s = 0; s < t; ++s) {
        const auto nbrs = g.neighbors(v);
        v = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
      }
      if (column[v] >= 0) counts(start, column[v]) += 1.0;
    }
  }
  return counts / static_cast<double>(walks);
}

/// Dominant eigenvector of the adjacency by full symmetric eigendecomposition, min-normalized.
Vector dense_eigen_oracle(const Graph& g);

/// Vanilla GCN with A~ = A + I and row normalization, coded with loops from the raw edge list.
inline Matrix vanilla_gcn_oracle(const Graph& g, const Matrix& x, const std::vector<Matrix>& weights,
                                 bool softmax_output) {
  const Index n = g.num_vertices();
  std::vector<std::vector<std::pair<Index, double>>> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) rows[i].push_back({i, 1.0});
  for (const Edge& e : g.edges()) {
    rows[e.u].push_back({e.v, e.weight});
    rows[e.v].push_back({e.u, e.weight});
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    double sum = 0.0;
    for (const auto& [j, w] : row) sum += w;
    for (auto& entry : row) entry.second /= sum;
  }
  Matrix h = x;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Matrix& w = weights[k];
    Matrix projected(n, w.cols());
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < w.cols(); ++c) {
        double acc = 0.0;
        for (Index r = 0; r < w.rows(); ++r) acc += h(i, r) * w(r, c);
        projected(i, c) = acc;
      }
    }
    Matrix next(n, w.cols());
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < w.cols(); ++c) {
        double acc = 0.0;
        for (const auto& [j, a] : rows[i]) acc += a * projected(j, c);
        next(i, c) = acc;
      }
    }
    const bool last = k + 1 == weights.size();
    for (Index i = 0; i < n; ++i) {
      if (last && softmax_output) {
        double top = next(i, 0);
        for (Index c = 1; c < next.cols(); ++c) top = std::max(top, next(i, c));
        double total = 0.0;
        for (Index c = 0; c < next.cols(); ++c) total += (next(i, c) = std::exp(next(i, c) - top));
        for (Index c = 0; c < next.cols(); ++c) next(i, c) /= total;
      } else {
        for (Index c = 0; c < next.cols(); ++c) next(i, c) = std::tanh(next(i, c));
      }
    }
    h = std::move(next);
  }
  return h;
}

/// Central differences of f with respect to every entry of every weight matrix.
inline std::vector<Matrix> finite_difference(std::vector<Matrix> weights,
                                             const std::function<double(const std::vector<Matrix>&)>& f,
                                             double h = 1e-5) {
  std::vector<Matrix> grads;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    Matrix g(weights[k].rows(), weights[k].cols());
    for (Index r = 0; r < g.rows(); ++r) {
      for (Index c = 0; c < g.cols(); ++c) {
        const double saved = weights[k](r, c);
        weights[k](r, c) = saved + h;
        const double up = f(weights);
        weights[k](r, c) = saved - h;
        const double down = f(weights);
        weights[k](r, c) = saved;
        g(r, c) = (up - down) / (2.0 * h);
      }
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

/// max |a - n| / max(max |a|, max |n|) per tensor, maximized over tensors.
inline double gradient_relative_error(const std::vector<Matrix>& analytic, const std::vector<Matrix>& numeric) {
  double worst = 0.0;
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double diff = (analytic[k] - numeric[k]).cwiseAbs().maxCoeff();
    const double scale = std::max(analytic[k].cwiseAbs().maxCoeff(), numeric[k].cwiseAbs().maxCoeff());
    if (scale > 0.0) worst = std::max(worst, diff / scale);
  }
  return worst;
}

/// One random gradient-check problem.
struct GradientInstance {
  Graph graph;
  Matrix features;
  PropagationGraph propagation;
  ModelConfig config;
  std::vector<Index> classes;
  std::vector<Index> mask;
  LossKind loss = LossKind::semi_supervised;
};

/// n in [4, 8], widths in [1, 4] (output >= 2 for softmax), a random connected graph,
/// and either A + I or a randomly reweighted adjacency with centrality-like diagonal.
GradientInstance random_gradient_instance(std::uint64_t seed, int layers, bool attention, bool transform,
                                          LossKind loss);

/// Runs the check on one instance; returns the worst relative error.
double gradient_check(const GradientInstance& instance, double alpha = 5e-4, double rho = 100.0);

}  // namespace cengcn::testing
