#include "cengcn/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cengcn/error.hpp"

namespace cengcn {
namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// std::tanh rather than Eigen's packet version, whose accuracy varies by release.
Matrix tanh_of(const Matrix& m) {
  return m.unaryExpr([](double x) { return std::tanh(x); });
}

void check_finite(const Matrix& m, int layer, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite ") + what + " at layer " + std::to_string(layer));
  }
}

// dL/dH given dL/dH~ for H~ = tanh(sum_j a_ij H_j), a = softmax_j(H_i . H_j).
Matrix attention_backward(const Matrix& h, const Matrix& attended, const std::vector<double>& weights,
                          const AttentionSupport& support, const Matrix& d_attended) {
  const Matrix d_pre = d_attended.cwiseProduct((1.0 - attended.array().square()).matrix());
  Matrix d_h = Matrix::Zero(h.rows(), h.cols());
  std::vector<double> d_weight;
  for (Index i = 0; i < h.rows(); ++i) {
    const auto members = support.of(i);
    const double* a = weights.data() + support.offsets[i];
    d_weight.assign(members.size(), 0.0);
    double weighted = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const Index j = members[k];
      d_weight[k] = d_pre.row(i).dot(h.row(j));
      d_h.row(j) += a[k] * d_pre.row(i);
      weighted += a[k] * d_weight[k];
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      const Index j = members[k];
      const double d_logit = a[k] * (d_weight[k] - weighted);
      d_h.row(i) += d_logit * h.row(j);
      d_h.row(j) += d_logit * h.row(i);
    }
  }
  return d_h;
}

Matrix edge_pattern(const Graph& graph) {
  const Index n = graph.num_vertices();
  Matrix a = Matrix::Zero(n, n);
  for (const Edge& e : graph.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

void check_target(const Matrix& z, const Graph& graph) {
  if (graph.num_vertices() != z.rows()) throw DataError("reconstruction target size does not match Z");
}

}  // namespace

SparseMatrix normalize_adjacency(const SparseMatrix& a_tilde, Normalization kind) {
  const Index n = a_tilde.rows();
  Vector sums = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a_tilde, i); it; ++it) s += it.value();
    if (!(s > 0.0)) throw NumericError("row " + std::to_string(i) + " of the adjacency sums to zero");
    sums[i] = s;
  }
  SparseMatrix out = a_tilde;
  for (Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(out, i); it; ++it) {
      if (kind == Normalization::row) {
        it.valueRef() = it.value() / sums[i];
      } else {
        it.valueRef() = it.value() / (std::sqrt(sums[i]) * std::sqrt(sums[it.col()]));
      }
    }
  }
  return out;
}

AttentionSupport attention_support(const Graph& graph, const std::vector<bool>& is_hub) {
  const Index n = graph.num_vertices();
  if (static_cast<Index>(is_hub.size()) != n) throw DataError("hub mask does not match graph size");
  AttentionSupport support;
  support.offsets.reserve(n + 1);
  for (Index i = 0; i < n; ++i) {
    bool self_added = false;
    for (Index j : graph.neighbors(i)) {
      if (!self_added && j > i) {
        support.members.push_back(i);
        self_added = true;
      }
      if (!is_hub[j]) support.members.push_back(j);
    }
    if (!self_added) support.members.push_back(i);
    support.offsets.push_back(static_cast<Index>(support.members.size()));
  }
  return support;
}

AttentionResult hub_attention(const Matrix& h, const AttentionSupport& support) {
  if (support.num_vertices() != h.rows()) throw DataError("attention support does not match feature rows");
  AttentionResult out;
  out.output = Matrix::Zero(h.rows(), h.cols());
  out.weights.resize(support.members.size());
  for (Index i = 0; i < h.rows(); ++i) {
    const auto members = support.of(i);
    double* a = out.weights.data() + support.offsets[i];
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < members.size(); ++k) {
      a[k] = h.row(i).dot(h.row(members[k]));
      top = std::max(top, a[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      a[k] = std::exp(a[k] - top);
      total += a[k];
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      a[k] /= total;
      out.output.row(i) += a[k] * h.row(members[k]);
    }
  }
  out.output = tanh_of(out.output);
  return out;
}

Matrix concat_columns(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) throw DataError("concatenation needs equal row counts");
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

Matrix softmax_rows(const Matrix& s) {
  // Scalar std::exp and a left-to-right sum keep results independent of SIMD width.
  Matrix out(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i) {
    const double top = s.row(i).maxCoeff();
    double total = 0.0;
    for (Index c = 0; c < s.cols(); ++c) total += (out(i, c) = std::exp(s(i, c) - top));
    for (Index c = 0; c < s.cols(); ++c) out(i, c) /= total;
  }
  return out;
}

Matrix forward_layer(const Matrix& input, const Matrix& weight, const SparseMatrix& a_norm,
                     Activation activation, int layer) {
  if (input.cols() != weight.rows() || a_norm.cols() != input.rows()) {
    throw DataError("shape mismatch at layer " + std::to_string(layer));
  }
  const Matrix projected = input * weight;
  const Matrix mixed = a_norm * projected;
  Matrix out = activation == Activation::tanh ? tanh_of(mixed) : softmax_rows(mixed);
  check_finite(out, layer, "activation");
  return out;
}

PropagationGraph::PropagationGraph(SparseMatrix normalized, AttentionSupport attention)
    : a_norm(std::move(normalized)), a_norm_transpose(a_norm.transpose()), support(std::move(attention)) {
  if (a_norm.rows() != a_norm.cols() || support.num_vertices() != a_norm.rows()) {
    throw DataError("propagation graph components disagree on vertex count");
  }
}

Index ModelConfig::input_width(int k) const {
  if (k == 0) return widths[0];
  return attention ? 2 * widths[k] : widths[k];
}

void ModelConfig::validate() const {
  if (widths.size() < 2) throw ConfigError("model needs at least one layer");
  for (Index w : widths) {
    if (w < 1) throw ConfigError("layer widths must be >= 1");
  }
  if (!(dropout_keep > 0.0 && dropout_keep <= 1.0)) throw ConfigError("dropout keep must lie in (0, 1]");
}

Model::Model(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  std::mt19937_64 rng(config_.seed);
  for (int k = 0; k < config_.layers(); ++k) {
    const Index fan_in = config_.input_width(k);
    const Index fan_out = config_.widths[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (Index r = 0; r < fan_in; ++r) {
      for (Index c = 0; c < fan_out; ++c) w(r, c) = dist(rng);
    }
    weights_.push_back(std::move(w));
  }
}

Model::Model(ModelConfig config, std::vector<Matrix> weights) : config_(std::move(config)), weights_(std::move(weights)) {
  config_.validate();
  if (static_cast<int>(weights_.size()) != config_.layers()) throw ConfigError("weight count does not match layer count");
  for (int k = 0; k < config_.layers(); ++k) {
    if (weights_[k].rows() != config_.input_width(k) || weights_[k].cols() != config_.widths[k + 1]) {
      throw ConfigError("weight " + std::to_string(k) + " has shape " + std::to_string(weights_[k].rows()) + "x" +
                        std::to_string(weights_[k].cols()) + ", expected " + std::to_string(config_.input_width(k)) +
                        "x" + std::to_string(config_.widths[k + 1]));
    }
    if (!weights_[k].allFinite()) throw NumericError("weight " + std::to_string(k) + " is not finite");
  }
}

ForwardTrace forward(const Model& model, const Matrix& features, const PropagationGraph& graph, PassMode mode,
                     std::mt19937_64* rng) {
  const ModelConfig& config = model.config();
  if (features.rows() != graph.num_vertices()) throw DataError("feature rows do not match vertex count");
  if (features.cols() != config.widths[0]) {
    throw DataError("feature dimension " + std::to_string(features.cols()) + " does not match model input width " +
                    std::to_string(config.widths[0]));
  }
  const bool drop = mode == PassMode::train && config.dropout_keep < 1.0;
  if (drop && rng == nullptr) throw ConfigError("training pass with dropout needs a random generator");

  const int depth = config.layers();
  ForwardTrace trace;
  trace.model_version = model.version();
  trace.mode = mode;
  trace.layers.resize(depth);

  Matrix current = features;
  for (int k = 0; k < depth; ++k) {
    LayerTrace& layer = trace.layers[k];
    if (drop) {
      std::bernoulli_distribution keep(config.dropout_keep);
      layer.mask.resize(current.rows(), current.cols());
      const double scale = 1.0 / config.dropout_keep;
      for (Index r = 0; r < current.rows(); ++r) {
        for (Index c = 0; c < current.cols(); ++c) layer.mask(r, c) = keep(*rng) ? scale : 0.0;
      }
      layer.input = current.cwiseProduct(layer.mask);
    } else {
      layer.input = std::move(current);
    }
    const bool last = k + 1 == depth;
    layer.activation = forward_layer(layer.input, model.weights()[k], graph.a_norm,
                                     last ? config.output : Activation::tanh, k + 1);
    if (last) break;
    if (config.attention) {
      AttentionResult attended = hub_attention(layer.activation, graph.support);
      layer.attended = std::move(attended.output);
      layer.attention = std::move(attended.weights);
      current = concat_columns(layer.activation, layer.attended);
    } else {
      current = layer.activation;
    }
  }
  return trace;
}

double semi_supervised_loss(const Matrix& z, std::span<const Index> classes, std::span<const Index> mask) {
  if (mask.empty()) throw DataError("cross-entropy needs at least one labeled vertex");
  double loss = 0.0;
  for (Index l : mask) {
    const Index y = classes[l];
    if (y < 0 || y >= z.cols()) throw DataError("class id outside the output width");
    loss -= std::log(std::max(z(l, y), kLogFloor));
  }
  return loss;
}

Matrix semi_supervised_loss_grad(const Matrix& z, std::span<const Index> classes, std::span<const Index> mask) {
  if (mask.empty()) throw DataError("cross-entropy needs at least one labeled vertex");
  Matrix grad = Matrix::Zero(z.rows(), z.cols());
  for (Index l : mask) {
    const Index y = classes[l];
    if (y < 0 || y >= z.cols()) throw DataError("class id outside the output width");
    if (z(l, y) > kLogFloor) grad(l, y) -= 1.0 / z(l, y);
  }
  return grad;
}

double unsupervised_loss(const Matrix& z, const Graph& graph, double rho) {
  check_target(z, graph);
  const Matrix a = edge_pattern(graph);
  const Matrix s = z * z.transpose();
  double loss = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      const double weight = a(i, j) != 0.0 ? rho : 1.0;
      const double r = weight * (sigmoid(s(i, j)) - a(i, j));
      loss += r * r;
    }
  }
  return loss;
}

Matrix unsupervised_loss_grad(const Matrix& z, const Graph& graph, double rho) {
  check_target(z, graph);
  const Matrix a = edge_pattern(graph);
  const Matrix s = z * z.transpose();
  Matrix q(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      const double weight = a(i, j) != 0.0 ? rho : 1.0;
      const double sig = sigmoid(s(i, j));
      q(i, j) = 2.0 * weight * weight * (sig - a(i, j)) * sig * (1.0 - sig);
    }
  }
  const Matrix sym = q + q.transpose();
  return sym * z;
}

double regularization(const Model& model, double alpha) {
  double sum = 0.0;
  for (const Matrix& w : model.weights()) sum += w.squaredNorm();
  return alpha * sum;
}

double objective_value(const Model& model, const ForwardTrace& trace, const Objective& objective) {
  const Matrix& z = trace.output();
  double data = 0.0;
  if (objective.kind == LossKind::semi_supervised) {
    data = semi_supervised_loss(z, objective.classes, objective.mask);
  } else {
    if (objective.target == nullptr) throw ConfigError("unsupervised objective needs a target graph");
    data = unsupervised_loss(z, *objective.target, objective.rho);
  }
  return data + regularization(model, objective.alpha);
}

LossGradient backward(const Model& model, const ForwardTrace& trace, const PropagationGraph& graph,
                      const Objective& objective) {
  if (trace.model_version != model.version() || static_cast<int>(trace.layers.size()) != model.layers()) {
    throw ConfigError("stale forward trace: model weights changed since the forward pass");
  }
  const ModelConfig& config = model.config();
  const Matrix& z = trace.output();

  LossGradient out;
  Matrix d_out;
  if (objective.kind == LossKind::semi_supervised) {
    out.data_loss = semi_supervised_loss(z, objective.classes, objective.mask);
    d_out = semi_supervised_loss_grad(z, objective.classes, objective.mask);
  } else {
    if (objective.target == nullptr) throw ConfigError("unsupervised objective needs a target graph");
    out.data_loss = unsupervised_loss(z, *objective.target, objective.rho);
    d_out = unsupervised_loss_grad(z, *objective.target, objective.rho);
  }
  out.regularization = regularization(model, objective.alpha);

  const int depth = model.layers();
  out.weights.resize(depth);
  Matrix d_act = std::move(d_out);
  for (int k = depth - 1; k >= 0; --k) {
    const LayerTrace& layer = trace.layers[k];
    const Matrix& h = layer.activation;
    Matrix d_pre;
    if (k + 1 == depth && config.output == Activation::softmax) {
      const Vector inner = d_act.cwiseProduct(h).rowwise().sum();
      d_pre = h.cwiseProduct(d_act - inner.replicate(1, h.cols()));
    } else {
      d_pre = d_act.cwiseProduct((1.0 - h.array().square()).matrix());
    }
    const Matrix d_projected = graph.a_norm_transpose * d_pre;
    const Matrix& w = model.weights()[k];
    out.weights[k] = layer.input.transpose() * d_projected + (2.0 * objective.alpha) * w;
    if (k == 0) break;

    Matrix d_input = d_projected * w.transpose();
    if (layer.mask.size() != 0) d_input = d_input.cwiseProduct(layer.mask);
    const LayerTrace& prev = trace.layers[k - 1];
    if (config.attention) {
      const Index width = prev.activation.cols();
      d_act = d_input.leftCols(width);
      d_act += attention_backward(prev.activation, prev.attended, prev.attention, graph.support,
                                  d_input.rightCols(width));
    } else {
      d_act = std::move(d_input);
    }
  }
  return out;
}

}  // namespace cengcn
