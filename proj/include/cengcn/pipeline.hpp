#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cengcn/centrality.hpp"
#include "cengcn/config.hpp"
#include "cengcn/eval.hpp"
#include "cengcn/gcn.hpp"
#include "cengcn/labelprop.hpp"
#include "cengcn/split.hpp"
#include "cengcn/train.hpp"
#include "cengcn/transform.hpp"

namespace cengcn {

struct Dataset {
  Graph graph;
  FeatureMatrix features;
  std::optional<LabelVector> labels;
  bool identity_features = false;
};

/// Reads files or runs the configured generator.
Dataset load_dataset(const RunConfig& config);

/// Centrality, label propagation and reweighting for one graph. For the
/// attention-only and GCN variants the adjacency is A + I; the GCN variant
/// skips centrality altogether.
struct TransformStage {
  std::optional<CentralityProfile> profile;
  std::optional<LabelMatrix> labels;
  std::optional<SimilaritySign> signs;
  TransformedAdjacency adjacency;
};

TransformStage run_transform(const Graph& graph, const RunConfig& config);

PropagationGraph build_propagation(const Graph& graph, const TransformStage& stage, const RunConfig& config);

/// Layer widths [m, hidden x (K-1), output] for the resolved config.
ModelConfig model_config(const RunConfig& config, Index feature_dim, Index classes);

/// Everything needed to train or evaluate a model for one config.
struct PreparedRun {
  RunConfig config;  // resolved
  Dataset data;
  std::optional<DataSplit> split;      // classify
  std::optional<LinkSplit> link;       // link
  TransformStage stage;
  PropagationGraph propagation;
  ModelConfig model;

  /// Graph the model trains on: the residual graph for link prediction.
  const Graph& training_graph() const { return link ? link->residual : data.graph; }
};

PreparedRun prepare_run(const RunConfig& config);

/// Optional per-iteration hook forwarded to the trainer.
TrainResult train_run(const PreparedRun& run,
                      std::function<void(int, const ForwardTrace&)> observer = {});

struct EvalReport {
  Task task = Task::classify;
  std::string metric_name;
  double metric_value = 0.0;
  Seed seed = 0;
  std::string config_text;
  std::vector<Index> assignment;  // clustering only
  Matrix embeddings;
};

/// Evaluates `model` on the task it was trained for. Throws ConfigError when
/// the model's output kind does not fit the task.
EvalReport evaluate_run(const PreparedRun& run, const Model& model, Task task);

}  // namespace cengcn
