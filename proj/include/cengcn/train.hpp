#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "cengcn/gcn.hpp"
#include "cengcn/split.hpp"

namespace cengcn {

struct HistoryRow {
  int iteration = 0;
  double train_loss = 0.0;
  double val_metric = std::numeric_limits<double>::quiet_NaN();
};

struct TrainOptions {
  double learning_rate = 0.01;
  int iterations = 1000;
  double alpha = 5e-4;
  double rho = 100.0;
  /// Unsupervised stop rule: relative loss change over `window` iterations.
  double tolerance = 1e-6;
  int window = 10;
  /// Called after every training forward pass.
  std::function<void(int iteration, const ForwardTrace&)> observer;
};

struct TrainResult {
  Model model;
  std::vector<HistoryRow> history;
  int best_iteration = -1;
  double best_val_metric = std::numeric_limits<double>::quiet_NaN();
};

/// Full-batch cross-entropy training on split.train; returns the weights
/// with the best validation accuracy (earliest on ties).
TrainResult train_semi_supervised(Model model, const Matrix& features,
                                  const PropagationGraph& graph, const LabelVector& labels,
                                  const DataSplit& split, const TrainOptions& options);

/// Edge reconstruction of `target`; stops on a flat loss window or after
/// options.iterations.
TrainResult train_unsupervised(Model model, const Matrix& features, const PropagationGraph& graph,
                               const Graph& target, const TrainOptions& options);

}  // namespace cengcn
