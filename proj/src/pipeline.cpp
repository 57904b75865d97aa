#include "cengcn/pipeline.hpp"

#include <string>

#include "cengcn/error.hpp"
#include "cengcn/generate.hpp"
#include "cengcn/io.hpp"
#include "cengcn/log.hpp"

namespace cengcn {
namespace {

char delimiter_char(const std::string& text) {
  if (text == "auto" || text == "space") return '\0';
  if (text == "tab") return '\t';
  return text.front();
}

Seed derive_seed(Seed base, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32), stream};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

}  // namespace

Dataset load_dataset(const RunConfig& config) {
  Dataset data;
  if (config.generator == "planted") {
    PlantedGraph planted = generate_planted_scale_free(config.gen_n, config.gen_m, config.gen_communities,
                                                       config.gen_mixing, config.gen_seed);
    data.graph = std::move(planted.graph);
    data.labels = std::move(planted.labels);
  } else if (config.generator == "scale_free") {
    data.graph = generate_scale_free(config.gen_n, config.gen_m, config.gen_seed);
  } else {
    if (config.edges.empty()) throw ConfigError("data.edges is required when no generator is set");
    data.graph = load_edge_list(config.edges, delimiter_char(config.delimiter)).graph;
  }
  if (!config.labels.empty()) data.labels = load_labels(config.labels, data.graph);
  if (config.features.empty()) {
    data.features = identity_features(data.graph.num_vertices());
    data.identity_features = true;
  } else {
    data.features = load_features(config.features, data.graph);
  }
  return data;
}

TransformStage run_transform(const Graph& graph, const RunConfig& config) {
  TransformStage stage;
  if (!config.transform_enabled()) {
    const RunConfig defaults;
    if (config.p != defaults.p || config.q != defaults.q) {
      log::warn("variant '" + std::string(to_string(config.variant)) +
                "' does not reweight edges; transform.p and transform.q are ignored");
    }
  }
  if (config.variant == Variant::gcn) {
    stage.adjacency = self_loop_adjacency(graph);
    return stage;
  }
  try {
    stage.profile = make_profile(graph, config.centrality, 100.0 * config.r,
                                 {.tol = config.eig_tol, .max_iter = config.eig_max_iter});
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("centrality: ") + e.what());
  }
  if (!config.transform_enabled()) {
    stage.adjacency = self_loop_adjacency(graph);
    return stage;
  }
  try {
    stage.labels = propagate(transition_matrix(graph), stage.profile->hubs, config.t);
    stage.signs = similarity_sign(graph, *stage.labels);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("label propagation: ") + e.what());
  }
  try {
    stage.adjacency = transform_graph(graph, *stage.profile, *stage.signs, config.p, config.q, config.weight_branch());
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("transform: ") + e.what());
  }
  return stage;
}

PropagationGraph build_propagation(const Graph& graph, const TransformStage& stage, const RunConfig& config) {
  std::vector<bool> is_hub(graph.num_vertices(), false);
  if (stage.profile) is_hub = stage.profile->is_hub;
  return PropagationGraph(normalize_adjacency(stage.adjacency.matrix(), config.normalization),
                          attention_support(graph, is_hub));
}

ModelConfig model_config(const RunConfig& config, Index feature_dim, Index classes) {
  ModelConfig model;
  const bool classify = config.task == Task::classify;
  const Index output = classify ? (config.output > 0 ? config.output : classes) : config.output;
  if (output < 1) throw ConfigError("cannot determine the output width");
  model.widths.push_back(feature_dim);
  for (int k = 1; k < config.layers; ++k) model.widths.push_back(config.hidden);
  model.widths.push_back(output);
  model.attention = config.attention_enabled();
  model.transform = config.transform_enabled();
  model.output = classify ? Activation::softmax : Activation::tanh;
  model.dropout_keep = config.dropout_keep;
  model.seed = config.seed;
  model.validate();
  return model;
}

PreparedRun prepare_run(const RunConfig& config) {
  PreparedRun run;
  run.config = config.resolved();
  run.data = load_dataset(run.config);
  const Graph& graph = run.data.graph;

  Index classes = 0;
  if (run.config.task == Task::classify || run.config.task == Task::cluster) {
    if (!run.data.labels) throw ConfigError(std::string(to_string(run.config.task)) + " needs vertex labels");
    run.data.labels->validate(graph.num_vertices());
    classes = run.data.labels->num_classes;
  }
  if (run.config.task == Task::classify) {
    run.split = split_vertices(*run.data.labels, run.config.train_frac, run.config.val_frac, run.config.split_seed);
  }
  if (run.config.task == Task::link) {
    run.link = sample_link_split(graph, run.config.hide_frac, run.config.split_seed);
  }
  run.stage = run_transform(run.training_graph(), run.config);
  run.propagation = build_propagation(run.training_graph(), run.stage, run.config);
  run.model = model_config(run.config, run.data.features.dim(), classes);
  return run;
}

TrainResult train_run(const PreparedRun& run, std::function<void(int, const ForwardTrace&)> observer) {
  const RunConfig& c = run.config;
  TrainOptions options;
  options.learning_rate = c.lr;
  options.iterations = c.iterations;
  options.alpha = c.alpha;
  options.rho = c.rho;
  options.tolerance = c.tolerance;
  options.observer = std::move(observer);
  Model model(run.model);
  if (c.task == Task::classify) {
    return train_semi_supervised(std::move(model), run.data.features.values, run.propagation, *run.data.labels,
                                 *run.split, options);
  }
  return train_unsupervised(std::move(model), run.data.features.values, run.propagation, run.training_graph(),
                            options);
}

EvalReport evaluate_run(const PreparedRun& run, const Model& model, Task task) {
  const RunConfig& c = run.config;
  if (task != c.task) {
    throw ConfigError("model was trained for '" + std::string(to_string(c.task)) + "', cannot evaluate '" +
                      std::string(to_string(task)) + "'");
  }
  EvalReport report;
  report.task = task;
  report.seed = c.seed;
  report.config_text = c.to_text();
  const ForwardTrace trace = forward(model, run.data.features.values, run.propagation, PassMode::eval);
  report.embeddings = trace.output();

  if (task == Task::classify) {
    if (model.config().output != Activation::softmax) throw ConfigError("classification needs a softmax model");
    report.metric_name = "accuracy";
    report.metric_value = accuracy(report.embeddings, run.data.labels->classes, run.split->test);
  } else if (task == Task::cluster) {
    const LabelVector& labels = *run.data.labels;
    const KMeansResult clusters =
        kmeans(report.embeddings, labels.num_classes, derive_seed(c.seed, 1), {.restarts = c.kmeans_restarts});
    std::vector<Index> predicted;
    std::vector<Index> truth;
    for (Index v : labels.labeled) {
      predicted.push_back(clusters.assignment[v]);
      truth.push_back(labels.classes[v]);
    }
    report.metric_name = "nmi";
    report.metric_value = nmi(predicted, truth);
    report.assignment = clusters.assignment;
  } else {
    const LinkSplit& split = *run.link;
    const Graph& residual = split.residual;
    std::vector<VertexPair> train_pairs;
    for (const Edge& e : residual.edges()) train_pairs.emplace_back(e.u, e.v);
    const std::size_t positives = train_pairs.size();
    const auto fresh = sample_non_edges(run.data.graph, positives, derive_seed(c.split_seed, 2), split.negatives);
    train_pairs.insert(train_pairs.end(), fresh.begin(), fresh.end());
    std::vector<int> train_labels(train_pairs.size(), 0);
    std::fill(train_labels.begin(), train_labels.begin() + static_cast<std::ptrdiff_t>(positives), 1);

    const LogisticRegression classifier =
        LogisticRegression::fit(hadamard_edge_features(report.embeddings, train_pairs), train_labels,
                                {.learning_rate = c.logreg_lr, .iterations = c.logreg_iters});

    std::vector<VertexPair> test_pairs = split.positives;
    test_pairs.insert(test_pairs.end(), split.negatives.begin(), split.negatives.end());
    std::vector<int> test_labels(test_pairs.size(), 0);
    std::fill(test_labels.begin(), test_labels.begin() + static_cast<std::ptrdiff_t>(split.positives.size()), 1);
    const Vector scores = classifier.predict(hadamard_edge_features(report.embeddings, test_pairs));
    report.metric_name = "auc";
    report.metric_value = auc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), test_labels);
  }
  return report;
}

}  // namespace cengcn
