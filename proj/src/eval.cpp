#include "cengcn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "cengcn/error.hpp"
#include "text_util.hpp"

namespace cengcn {
namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

// log(1 + exp(s)) without overflow.
double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

void check_binary(std::span<const int> labels01) {
  bool pos = false;
  bool neg = false;
  for (int y : labels01) {
    if (y != 0 && y != 1) throw DataError("binary labels must be 0 or 1");
    pos = pos || y == 1;
    neg = neg || y == 0;
  }
  if (!pos || !neg) throw DataError("both classes must be present");
}

// Entropy of a count table; counts are sorted first so equal multisets give
// bit-identical sums.
double entropy(std::vector<double> counts, double total) {
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

double squared_distance(const Matrix& a, Index i, const Matrix& b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

struct LloydRun {
  std::vector<Index> assignment;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

LloydRun lloyd(const Matrix& points, Index k, std::mt19937_64& rng, int max_iter) {
  const Index n = points.rows();
  LloydRun run;
  run.centroids.resize(k, points.cols());

  // k-means++ seeding.
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::uniform_int_distribution<Index> uniform(0, n - 1);
  Index chosen = uniform(rng);
  for (Index c = 0; c < k; ++c) {
    if (c > 0) {
      const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
      if (total > 0.0) {
        std::discrete_distribution<Index> weighted(nearest.begin(), nearest.end());
        chosen = weighted(rng);
      } else {
        chosen = uniform(rng);
      }
    }
    run.centroids.row(c) = points.row(chosen);
    for (Index i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], squared_distance(points, i, run.centroids, c));
  }

  run.assignment.assign(n, -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = squared_distance(points, i, run.centroids, 0);
      for (Index c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, run.centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      inertia += best_d;
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
    }
    run.inertia = inertia;
    run.trace.push_back(inertia);
    if (!changed) break;

    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(run.assignment[i]) += points.row(i);
      ++counts[run.assignment[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) run.centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
    }
  }
  return run;
}

}  // namespace

std::vector<Index> argmax_rows(const Matrix& predictions) {
  std::vector<Index> out(predictions.rows());
  for (Index i = 0; i < predictions.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < predictions.cols(); ++c) {
      if (predictions(i, c) > predictions(i, best)) best = c;
    }
    out[i] = best;
  }
  return out;
}

double accuracy(const Matrix& predictions, std::span<const Index> classes, std::span<const Index> indices) {
  if (indices.empty()) throw DataError("accuracy needs a nonempty index set");
  std::size_t correct = 0;
  for (Index i : indices) {
    Index best = 0;
    for (Index c = 1; c < predictions.cols(); ++c) {
      if (predictions(i, c) > predictions(i, best)) best = c;
    }
    if (best == classes[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

Matrix hadamard_edge_features(const Matrix& z, std::span<const VertexPair> pairs) {
  Matrix out(static_cast<Index>(pairs.size()), z.cols());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i < 0 || j < 0 || i >= z.rows() || j >= z.rows()) throw DataError("vertex pair out of range");
    out.row(static_cast<Index>(k)) = z.row(i).cwiseProduct(z.row(j));
  }
  return out;
}

double LogisticRegression::objective(const Matrix& features, std::span<const int> labels01, const Vector& w,
                                     double b, double l2, Vector* grad_w, double* grad_b) {
  const Index n = features.rows();
  const Vector scores = (features * w).array() + b;
  double loss = 0.0;
  Vector residual(n);
  for (Index i = 0; i < n; ++i) {
    loss += softplus(scores[i]) - labels01[i] * scores[i];
    residual[i] = sigmoid(scores[i]) - labels01[i];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad_w) *grad_w = inv_n * (features.transpose() * residual) + l2 * w;
  if (grad_b) *grad_b = inv_n * residual.sum();
  return inv_n * loss + 0.5 * l2 * w.squaredNorm();
}

LogisticRegression LogisticRegression::fit(const Matrix& features, std::span<const int> labels01,
                                           const LogisticOptions& options) {
  if (static_cast<Index>(labels01.size()) != features.rows()) throw DataError("label count does not match feature rows");
  check_binary(labels01);
  LogisticRegression model;
  model.w_ = Vector::Zero(features.cols());
  model.b_ = 0.0;
  Vector grad_w;
  double grad_b = 0.0;
  for (int it = 0; it < options.iterations; ++it) {
    objective(features, labels01, model.w_, model.b_, options.l2, &grad_w, &grad_b);
    model.w_ -= options.learning_rate * grad_w;
    model.b_ -= options.learning_rate * grad_b;
  }
  return model;
}

Vector LogisticRegression::predict(const Matrix& features) const {
  const Vector scores = (features * w_).array() + b_;
  return scores.unaryExpr([](double s) { return sigmoid(s); });
}

double auc(std::span<const double> scores, std::span<const int> labels01) {
  if (scores.size() != labels01.size()) throw DataError("score and label counts differ");
  check_binary(labels01);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    const double mid_rank = 0.5 * static_cast<double>(start + 1 + end);  // average of ranks start+1..end
    for (std::size_t k = start; k < end; ++k) {
      if (labels01[order[k]] == 1) {
        positive_rank_sum += mid_rank;
        positives += 1.0;
      }
    }
    start = end;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  return (positive_rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

KMeansResult kmeans(const Matrix& points, Index k, Seed seed, const KMeansOptions& options) {
  if (k < 1 || k > points.rows()) {
    throw DataError("k-means needs 1 <= k <= n (k = " + std::to_string(k) + ", n = " + std::to_string(points.rows()) + ")");
  }
  if (options.restarts < 1 || options.max_iter < 1) throw ConfigError("k-means restarts and iterations must be >= 1");
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    LloydRun run = lloyd(points, k, rng, options.max_iter);
    if (run.inertia < best.inertia) {
      best.assignment = std::move(run.assignment);
      best.centroids = std::move(run.centroids);
      best.inertia = run.inertia;
      best.inertia_trace = std::move(run.trace);
    }
  }
  return best;
}

double nmi(std::span<const Index> a, std::span<const Index> b) {
  if (a.size() != b.size()) throw DataError("partitions have different lengths");
  if (a.empty()) throw DataError("partitions are empty");
  std::map<Index, double> count_a;
  std::map<Index, double> count_b;
  std::map<std::pair<Index, Index>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    count_a[a[i]] += 1.0;
    count_b[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  auto values = [](const auto& m) {
    std::vector<double> v;
    for (const auto& [key, c] : m) v.push_back(c);
    return v;
  };
  const double total = static_cast<double>(a.size());
  const double h_a = entropy(values(count_a), total);
  const double h_b = entropy(values(count_b), total);
  if (h_a == 0.0 || h_b == 0.0) return 0.0;
  const double h_joint = entropy(values(joint), total);
  const double mutual = h_a + h_b - h_joint;
  return std::clamp(mutual / std::sqrt(h_a * h_b), 0.0, 1.0);
}

void export_embeddings(const Matrix& z, const std::vector<std::string>& ids, const std::filesystem::path& path) {
  if (static_cast<Index>(ids.size()) != z.rows()) throw DataError("id count does not match embedding rows");
  auto out = detail::open_output(path);
  out << "# " << z.rows() << ' ' << z.cols() << '\n';
  for (Index i = 0; i < z.rows(); ++i) {
    out << ids[i];
    for (Index c = 0; c < z.cols(); ++c) out << ' ' << detail::format_double(z(i, c));
    out << '\n';
  }
  detail::finish_output(out, path);
}

EmbeddingFile load_embeddings(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty embedding file");
  const auto header = detail::tokenize(std::string_view(line).substr(std::min<std::size_t>(line.size(), 1)));
  if (line.empty() || line[0] != '#' || header.size() != 2) throw DataError(path.string() + ": missing '# n d' header");
  const auto n = detail::parse_int(header[0]);
  const auto d = detail::parse_int(header[1]);
  if (!n || !d || *n < 0 || *d < 0) throw DataError(path.string() + ": malformed header");
  EmbeddingFile file;
  file.values.resize(*n, *d);
  std::size_t line_no = 1;
  Index row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::tokenize(line);
    if (tokens.empty()) continue;
    if (row >= *n || static_cast<long long>(tokens.size()) != *d + 1) {
      throw DataError(detail::where(path, line_no) + ": unexpected row");
    }
    file.ids.emplace_back(tokens[0]);
    for (Index c = 0; c < *d; ++c) {
      const auto v = detail::parse_double(tokens[c + 1]);
      if (!v) throw DataError(detail::where(path, line_no) + ": invalid value");
      file.values(row, c) = *v;
    }
    ++row;
  }
  if (row != *n) throw DataError(path.string() + ": expected " + std::to_string(*n) + " rows");
  return file;
}

}  // namespace cengcn
