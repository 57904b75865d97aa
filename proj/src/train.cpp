#include "cengcn/train.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cengcn/error.hpp"
#include "cengcn/eval.hpp"
#include "cengcn/optim.hpp"

namespace cengcn {
namespace {

std::mt19937_64 dropout_rng(Seed seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xd20u};
  return std::mt19937_64(seq);
}

void check_options(const TrainOptions& options) {
  if (!(options.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (options.iterations < 1) throw ConfigError("iteration count must be >= 1");
  if (options.alpha < 0.0) throw ConfigError("alpha must be >= 0");
}

double step(Model& model, Adam& adam, const Matrix& features, const PropagationGraph& graph,
            const Objective& objective, std::mt19937_64& rng, const TrainOptions& options, int iteration) {
  const ForwardTrace trace = forward(model, features, graph, PassMode::train, &rng);
  if (options.observer) options.observer(iteration, trace);
  const LossGradient grad = backward(model, trace, graph, objective);
  const double loss = grad.total();
  if (!std::isfinite(loss)) throw NumericError("training diverged at iteration " + std::to_string(iteration));
  auto& weights = model.mutable_weights();
  adam.step(weights, grad.weights);
  for (const Matrix& w : weights) {
    if (!w.allFinite()) throw NumericError("non-finite weights after iteration " + std::to_string(iteration));
  }
  return loss;
}

}  // namespace

TrainResult train_semi_supervised(Model model, const Matrix& features, const PropagationGraph& graph,
                                  const LabelVector& labels, const DataSplit& split, const TrainOptions& options) {
  check_options(options);
  if (model.config().output != Activation::softmax) throw ConfigError("classification needs a softmax output layer");
  Objective objective;
  objective.kind = LossKind::semi_supervised;
  objective.classes = labels.classes;
  objective.mask = split.train;
  objective.alpha = options.alpha;
  const std::span<const Index> selection =
      split.validation.empty() ? std::span<const Index>(split.train) : std::span<const Index>(split.validation);

  Adam adam({.learning_rate = options.learning_rate}, model.weights());
  auto rng = dropout_rng(model.config().seed);
  TrainResult result;
  result.history.reserve(options.iterations);
  result.best_val_metric = -1.0;
  for (int it = 1; it <= options.iterations; ++it) {
    const double loss = step(model, adam, features, graph, objective, rng, options, it);
    const ForwardTrace eval = forward(model, features, graph, PassMode::eval);
    const double val = accuracy(eval.output(), labels.classes, selection);
    result.history.push_back({it, loss, val});
    if (val > result.best_val_metric) {
      result.best_val_metric = val;
      result.best_iteration = it;
      result.model = model;
    }
  }
  return result;
}

TrainResult train_unsupervised(Model model, const Matrix& features, const PropagationGraph& graph,
                               const Graph& target, const TrainOptions& options) {
  check_options(options);
  Objective objective;
  objective.kind = LossKind::unsupervised;
  objective.target = &target;
  objective.rho = options.rho;
  objective.alpha = options.alpha;

  Adam adam({.learning_rate = options.learning_rate}, model.weights());
  auto rng = dropout_rng(model.config().seed);
  TrainResult result;
  for (int it = 1; it <= options.iterations; ++it) {
    const double loss = step(model, adam, features, graph, objective, rng, options, it);
    result.history.push_back({it, loss, std::numeric_limits<double>::quiet_NaN()});
    if (options.window > 0 && static_cast<int>(result.history.size()) > options.window) {
      const double before = result.history[result.history.size() - 1 - options.window].train_loss;
      const double change = std::abs(loss - before) / std::max(std::abs(before), 1e-300);
      if (change < options.tolerance) break;
    }
  }
  result.best_iteration = result.history.back().iteration;
  result.model = std::move(model);
  return result;
}

}  // namespace cengcn
