#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cengcn/split.hpp"
#include "cengcn/types.hpp"

namespace cengcn {

/// Row argmax; ties resolve to the lowest column.
std::vector<Index> argmax_rows(const Matrix& predictions);

/// Fraction of `indices` whose argmax prediction equals the class.
/// Throws DataError on an empty index set.
double accuracy(const Matrix& predictions, std::span<const Index> classes,
                std::span<const Index> indices);

/// Row per pair: Z_i .* Z_j.
Matrix hadamard_edge_features(const Matrix& z, std::span<const VertexPair> pairs);

struct LogisticOptions {
  double learning_rate = 0.5;
  int iterations = 500;
  double l2 = 1e-4;
};

/// Binary logistic regression trained by full-batch gradient descent from
/// zero weights on the mean log-loss + (l2 / 2) ||w||^2.
class LogisticRegression {
 public:
  LogisticRegression() = default;

  /// Throws DataError unless both classes are present.
  static LogisticRegression fit(const Matrix& features, std::span<const int> labels01,
                                const LogisticOptions& options = {});

  /// Objective value and gradient (w then b) at the given parameters.
  static double objective(const Matrix& features, std::span<const int> labels01, const Vector& w,
                          double b, double l2, Vector* grad_w = nullptr, double* grad_b = nullptr);

  Vector predict(const Matrix& features) const;

  const Vector& weights() const noexcept { return w_; }
  double bias() const noexcept { return b_; }

 private:
  Vector w_;
  double b_ = 0.0;
};

/// Mann-Whitney AUC; ties count one half. Throws DataError when a class is absent.
double auc(std::span<const double> scores, std::span<const int> labels01);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

struct KMeansResult {
  std::vector<Index> assignment;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // best restart, one entry per Lloyd iteration
};

/// k-means++ seeding and Lloyd iterations; keeps the restart with the lowest
/// inertia. Throws DataError if k > n or k < 1.
KMeansResult kmeans(const Matrix& points, Index k, Seed seed, const KMeansOptions& options = {});

/// I(U;V) / sqrt(H(U) H(V)), natural logs; 0 when either entropy is 0.
double nmi(std::span<const Index> a, std::span<const Index> b);

/// Header "# n d", then "id z_1 ... z_d" per vertex with 17 significant digits.
void export_embeddings(const Matrix& z, const std::vector<std::string>& ids,
                       const std::filesystem::path& path);

struct EmbeddingFile {
  std::vector<std::string> ids;
  Matrix values;
};
EmbeddingFile load_embeddings(const std::filesystem::path& path);

}  // namespace cengcn
