#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cengcn/graph.hpp"
#include "cengcn/types.hpp"

namespace cengcn {

enum class Normalization { row, symmetric };

/// D~^{-1} A~ (row) or D~^{-1/2} A~ D~^{-1/2} (symmetric), D~ the row sums of A~.
/// Throws NumericError if a row sums to zero.
SparseMatrix normalize_adjacency(const SparseMatrix& a_tilde, Normalization kind = Normalization::row);

inline SparseMatrix row_normalize(const SparseMatrix& a_tilde) {
  return normalize_adjacency(a_tilde, Normalization::row);
}

/// Per-vertex attention support S_i = (non-hub neighbors of i) + {i},
/// stored CSR-style with ascending members.
struct AttentionSupport {
  std::vector<Index> offsets{0};
  std::vector<Index> members;

  Index num_vertices() const { return static_cast<Index>(offsets.size()) - 1; }
  std::span<const Index> of(Index i) const {
    return {members.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }
};

AttentionSupport attention_support(const Graph& graph, const std::vector<bool>& is_hub);

struct AttentionResult {
  Matrix output;                // tanh(sum_j a_ij H_j)
  std::vector<double> weights;  // a_ij, aligned with AttentionSupport::members
};

/// a_ij = softmax over S_i of H_i . H_j (max-subtracted); output row i is
/// tanh(sum_j a_ij H_j).
AttentionResult hub_attention(const Matrix& h, const AttentionSupport& support);

/// [left | right] row-wise. Throws DataError on row-count mismatch.
Matrix concat_columns(const Matrix& left, const Matrix& right);

enum class Activation { tanh, softmax };

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& s);

/// act(A_norm (H W)). Throws NumericError naming `layer` on non-finite output.
Matrix forward_layer(const Matrix& input, const Matrix& weight, const SparseMatrix& a_norm,
                     Activation activation = Activation::tanh, int layer = 0);

/// Everything the forward pass needs from the (transformed) graph.
struct PropagationGraph {
  SparseMatrix a_norm;
  SparseMatrix a_norm_transpose;
  AttentionSupport support;

  PropagationGraph() = default;
  PropagationGraph(SparseMatrix normalized, AttentionSupport attention);

  Index num_vertices() const { return a_norm.rows(); }
};

struct ModelConfig {
  std::vector<Index> widths;  // d_0 = feature dim, d_1 .. d_K
  bool attention = true;
  bool transform = true;  // recorded only; the adjacency is built outside the engine
  Activation output = Activation::softmax;
  double dropout_keep = 0.5;
  Seed seed = 0;

  int layers() const { return static_cast<int>(widths.size()) - 1; }
  /// Rows of the weight for layer k (0-based): d_0 for k = 0, otherwise
  /// d_k doubled when attention concatenates.
  Index input_width(int k) const;
  /// Throws ConfigError for inconsistent settings.
  void validate() const;
};

/// Layer weights W^0..W^{K-1}. Mutable access bumps a version counter so
/// that traces from earlier forward passes are rejected by backward().
class Model {
 public:
  Model() = default;
  /// Glorot-uniform initialization seeded by config.seed.
  explicit Model(ModelConfig config);
  Model(ModelConfig config, std::vector<Matrix> weights);

  const ModelConfig& config() const noexcept { return config_; }
  int layers() const noexcept { return config_.layers(); }
  const std::vector<Matrix>& weights() const noexcept { return weights_; }
  std::vector<Matrix>& mutable_weights() noexcept {
    ++version_;
    return weights_;
  }
  std::uint64_t version() const noexcept { return version_; }

 private:
  ModelConfig config_;
  std::vector<Matrix> weights_;
  std::uint64_t version_ = 0;
};

enum class PassMode { train, eval };

struct LayerTrace {
  Matrix input;                   // after dropout
  Matrix mask;                    // inverted-dropout multipliers; empty in eval mode
  Matrix activation;              // H^k, or Z for the output layer
  Matrix attended;                // H~^k; empty when attention is off or k = K
  std::vector<double> attention;  // a_ij aligned with the support
};

struct ForwardTrace {
  std::vector<LayerTrace> layers;
  std::uint64_t model_version = 0;
  PassMode mode = PassMode::eval;

  const Matrix& output() const { return layers.back().activation; }
};

/// Runs the K layers. In train mode dropout masks are drawn from `rng`
/// (required unless dropout_keep == 1).
ForwardTrace forward(const Model& model, const Matrix& features, const PropagationGraph& graph,
                     PassMode mode = PassMode::eval, std::mt19937_64* rng = nullptr);

inline constexpr double kLogFloor = 1e-12;

/// -sum_{l in mask} ln max(Z[l, y_l], 1e-12). Throws DataError on an empty mask.
double semi_supervised_loss(const Matrix& z, std::span<const Index> classes,
                            std::span<const Index> mask);
Matrix semi_supervised_loss_grad(const Matrix& z, std::span<const Index> classes,
                                 std::span<const Index> mask);

/// || (sigmoid(Z Z^T) - A) .* Ahat ||_F^2 over all n^2 entries, with A the
/// 0/1 edge pattern of `graph` and Ahat = rho on edges, 1 elsewhere.
double unsupervised_loss(const Matrix& z, const Graph& graph, double rho = 100.0);
Matrix unsupervised_loss_grad(const Matrix& z, const Graph& graph, double rho = 100.0);

/// alpha * sum_k ||W^k||_F^2.
double regularization(const Model& model, double alpha = 5e-4);

enum class LossKind { semi_supervised, unsupervised };

struct Objective {
  LossKind kind = LossKind::semi_supervised;
  std::span<const Index> classes;  // semi-supervised
  std::span<const Index> mask;     // semi-supervised
  const Graph* target = nullptr;   // unsupervised
  double rho = 100.0;
  double alpha = 5e-4;
};

struct LossGradient {
  double data_loss = 0.0;
  double regularization = 0.0;
  std::vector<Matrix> weights;

  double total() const { return data_loss + regularization; }
};

double objective_value(const Model& model, const ForwardTrace& trace, const Objective& objective);

/// Reverse-mode gradients of data loss + alpha * L_reg for every W^k.
/// Throws ConfigError if the trace was produced by another model version.
LossGradient backward(const Model& model, const ForwardTrace& trace, const PropagationGraph& graph,
                      const Objective& objective);

}  // namespace cengcn
