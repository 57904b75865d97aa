#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cengcn/error.hpp"
#include "cengcn/eval.hpp"
#include "cengcn/gcn.hpp"
#include "cengcn/optim.hpp"
#include "cengcn/train.hpp"
#include "cengcn/transform.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cengcn {
namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

PropagationGraph plain_propagation(const Graph& g, std::vector<bool> is_hub = {}) {
  if (is_hub.empty()) is_hub.assign(static_cast<std::size_t>(g.num_vertices()), false);
  return PropagationGraph(row_normalize(self_loop_adjacency(g).matrix()), attention_support(g, is_hub));
}

ModelConfig config(std::vector<Index> widths, bool attention, Activation output, double keep = 1.0,
                   Seed seed = 3) {
  ModelConfig c;
  c.widths = std::move(widths);
  c.attention = attention;
  c.output = output;
  c.dropout_keep = keep;
  c.seed = seed;
  return c;
}

TEST(RowNormalize, Identity) {
  SparseMatrix eye(4, 4);
  eye.setIdentity();
  EXPECT_EQ(Matrix(row_normalize(eye)), Matrix::Identity(4, 4));
}

TEST(RowNormalize, TransformedStar) {
  TransformedAdjacency a = self_loop_adjacency(testing::star());
  a.diagonal[0] = 4.0;
  for (Edge& e : a.edges) e.weight = 4.0;
  const Matrix m = Matrix(row_normalize(a.matrix()));
  for (Index j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(m(0, j), 4.0 / 20.0);
  for (Index leaf = 1; leaf <= 4; ++leaf) {
    EXPECT_DOUBLE_EQ(m(leaf, 0), 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(m(leaf, leaf), 1.0 / 5.0);
    EXPECT_DOUBLE_EQ(m.row(leaf).sum(), 1.0);
  }
}

TEST(RowNormalize, RowsSumToOneAndSymmetricVariant) {
  const Graph g = testing::random_connected(20, 0.2, 6);
  const SparseMatrix a = self_loop_adjacency(g).matrix();
  const Matrix r = Matrix(row_normalize(a));
  EXPECT_LT((r.rowwise().sum() - Vector::Ones(20)).cwiseAbs().maxCoeff(), 1e-14);
  const Matrix s = Matrix(normalize_adjacency(a, Normalization::symmetric));
  EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix dense = Matrix(a);
  const Vector d = dense.rowwise().sum();
  EXPECT_NEAR(s(0, 0), dense(0, 0) / d[0], 1e-15);
}

TEST(RowNormalize, ZeroRowIsNumericError) {
  SparseMatrix z(2, 2);
  z.insert(0, 0) = 1.0;
  EXPECT_THROW(row_normalize(z), NumericError);
}

TEST(ForwardLayer, ZeroInputGivesZero) {
  SparseMatrix eye(3, 3);
  eye.setIdentity();
  const Matrix h = forward_layer(Matrix::Zero(3, 2), Matrix::Identity(2, 2), eye);
  EXPECT_EQ(h, Matrix::Zero(3, 2));
}

TEST(ForwardLayer, MatchesOracleOnPath) {
  const Graph g = testing::path3();
  const Matrix x = random_matrix(3, 4, 1);
  const Matrix w = random_matrix(4, 3, 2);
  const Matrix h = forward_layer(x, w, row_normalize(self_loop_adjacency(g).matrix()));
  const Matrix expected = testing::vanilla_gcn_oracle(g, x, {w}, false);
  EXPECT_LT((h - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(h.cwiseAbs().maxCoeff(), 1.0);
}

TEST(ForwardLayer, NonFiniteNamesLayer) {
  SparseMatrix eye(2, 2);
  eye.setIdentity();
  Matrix x = Matrix::Ones(2, 2);
  x(1, 1) = std::nan("");
  try {
    forward_layer(x, Matrix::Identity(2, 2), eye, Activation::tanh, 3);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 3"), std::string::npos);
  }
}

TEST(Attention, SingletonSupport) {
  // Every neighbor of every vertex is a hub, so each support is {i}.
  const Graph g = testing::complete(3);
  const AttentionSupport s = attention_support(g, {true, true, true});
  const Matrix h = random_matrix(3, 2, 4);
  const AttentionResult r = hub_attention(h, s);
  EXPECT_EQ(r.weights, std::vector<double>(3, 1.0));
  EXPECT_EQ(r.output, Matrix(h.array().tanh().matrix()));
}

TEST(Attention, IdenticalRowsAreUniform) {
  const Graph g = testing::random_connected(8, 0.3, 2);
  std::vector<bool> is_hub(8, false);
  is_hub[1] = true;
  const AttentionSupport s = attention_support(g, is_hub);
  const Matrix h = Matrix::Constant(8, 3, 0.3);
  const AttentionResult r = hub_attention(h, s);
  for (Index i = 0; i < 8; ++i) {
    const auto members = s.of(i);
    for (std::size_t k = 0; k < members.size(); ++k) {
      EXPECT_NEAR(r.weights[s.offsets[i] + k], 1.0 / static_cast<double>(members.size()), 1e-15);
    }
  }
}

TEST(Attention, SupportIsNonHubNeighborsPlusSelf) {
  const Graph g = testing::star();
  const AttentionSupport s = attention_support(g, {true, false, false, false, false});
  EXPECT_EQ(std::vector<Index>(s.of(0).begin(), s.of(0).end()), (std::vector<Index>{0, 1, 2, 3, 4}));
  EXPECT_EQ(std::vector<Index>(s.of(2).begin(), s.of(2).end()), (std::vector<Index>{2}));
}

TEST(Attention, MatchesBruteForce) {
  const Graph g = testing::random_connected(6, 0.4, 5);
  const std::vector<bool> is_hub{false, true, false, false, true, false};
  const Matrix h = random_matrix(6, 3, 9);
  const AttentionResult r = hub_attention(h, attention_support(g, is_hub));
  for (Index i = 0; i < 6; ++i) {
    std::vector<Index> support{i};
    for (Index j = 0; j < 6; ++j) {
      if (j != i && g.has_edge(i, j) && !is_hub[j]) support.push_back(j);
    }
    double denom = 0.0;
    for (Index l : support) denom += std::exp(h.row(i).dot(h.row(l)));
    Vector acc = Vector::Zero(3);
    double mass = 0.0;
    for (Index j : support) {
      const double a = std::exp(h.row(i).dot(h.row(j))) / denom;
      acc += a * h.row(j).transpose();
      mass += a;
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
    for (Index c = 0; c < 3; ++c) EXPECT_NEAR(r.output(i, c), std::tanh(acc[c]), 1e-12);
  }
  const AttentionSupport s = attention_support(g, is_hub);
  for (Index i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (Index k = s.offsets[i]; k < s.offsets[i + 1]; ++k) sum += r.weights[k];
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Concat, ShapesAndSlices) {
  const Matrix a = random_matrix(4, 3, 1);
  const Matrix b = random_matrix(4, 3, 2);
  const Matrix c = concat_columns(a, b);
  EXPECT_EQ(c.cols(), 6);
  EXPECT_EQ(Matrix(c.leftCols(3)), a);
  EXPECT_EQ(Matrix(c.rightCols(3)), b);
  const Matrix same = concat_columns(a, a);
  EXPECT_EQ(Matrix(same.leftCols(3)), Matrix(same.rightCols(3)));
  EXPECT_THROW(concat_columns(a, random_matrix(3, 3, 1)), DataError);
}

TEST(Forward, ClassificationShape) {
  const Graph g = testing::random_connected(12, 0.3, 1);
  const Model model(config({12, 16, 3}, true, Activation::softmax));
  EXPECT_EQ(model.weights()[1].rows(), 32);
  const Matrix z = forward(model, Matrix::Identity(12, 12), plain_propagation(g)).output();
  EXPECT_EQ(z.cols(), 3);
  EXPECT_LT((z.rowwise().sum() - Vector::Ones(12)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Forward, EmbeddingShape) {
  const Graph g = testing::random_connected(10, 0.3, 1);
  const Model model(config({10, 512, 128}, true, Activation::tanh));
  const Matrix z = forward(model, Matrix::Identity(10, 10), plain_propagation(g)).output();
  EXPECT_EQ(z.rows(), 10);
  EXPECT_EQ(z.cols(), 128);
  EXPECT_LE(z.cwiseAbs().maxCoeff(), 1.0);
}

TEST(Forward, EvalIsDeterministicAndDropoutNeedsRng) {
  const Graph g = testing::random_connected(10, 0.3, 1);
  const PropagationGraph pg = plain_propagation(g);
  const Model model(config({10, 8, 4, 2}, true, Activation::softmax, 0.5));
  const Matrix x = random_matrix(10, 10, 3);
  EXPECT_EQ(forward(model, x, pg).output(), forward(model, x, pg).output());
  EXPECT_THROW(forward(model, x, pg, PassMode::train), ConfigError);

  std::mt19937_64 rng(1);
  const ForwardTrace t = forward(model, x, pg, PassMode::train, &rng);
  for (const LayerTrace& layer : t.layers) {
    ASSERT_EQ(layer.mask.rows(), layer.input.rows());
    for (Index i = 0; i < layer.mask.size(); ++i) {
      const double m = layer.mask.data()[i];
      EXPECT_TRUE(m == 0.0 || m == 2.0);
    }
  }
}

TEST(Forward, VanillaReductionIsBitExact) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = testing::random_connected(15, 0.2, seed);
    CentralityProfile flat = make_profile(Vector::Ones(15), CentralityMeasure::degree, 10.0);
    const TransformedAdjacency adj =
        transform_graph(g, flat, SimilaritySign{std::vector<int>(g.num_edges(), 1)}, 1.0, -1.0);
    const PropagationGraph pg(row_normalize(adj.matrix()), attention_support(g, flat.is_hub));
    for (bool softmax : {false, true}) {
      const Model model(config({6, 5, 4, 3}, false, softmax ? Activation::softmax : Activation::tanh, 1.0, seed));
      const Matrix x = random_matrix(15, 6, seed + 100);
      const Matrix z = forward(model, x, pg).output();
      const Matrix expected = testing::vanilla_gcn_oracle(g, x, model.weights(), softmax);
      EXPECT_TRUE(z == expected) << "seed " << seed << " softmax " << softmax << " max diff "
                                 << (z - expected).cwiseAbs().maxCoeff();
    }
  }
}

TEST(SemiSupervisedLoss, Examples) {
  const Matrix perfect = (Matrix(3, 2) << 1, 0, 0, 1, 1, 0).finished();
  const std::vector<Index> classes{0, 1, 0};
  const std::vector<Index> mask{0, 1, 2};
  EXPECT_EQ(semi_supervised_loss(perfect, classes, mask), 0.0);

  const Matrix uniform = Matrix::Constant(4, 5, 0.2);
  const std::vector<Index> c4{0, 1, 2, 3};
  const std::vector<Index> m3{0, 2, 3};
  EXPECT_NEAR(semi_supervised_loss(uniform, c4, m3), 3.0 * std::log(5.0), 1e-12);
  EXPECT_THROW(semi_supervised_loss(uniform, c4, {}), DataError);
}

TEST(SemiSupervisedLoss, MatchesSummationOracle) {
  const Matrix z = softmax_rows(random_matrix(9, 4, 7));
  std::vector<Index> classes{0, 3, 2, 1, 1, 0, 3, 2, 2};
  std::vector<Index> mask{0, 2, 3, 5, 8};
  double oracle = 0.0;
  for (Index l : mask) {
    for (Index f = 0; f < 4; ++f) oracle -= (classes[l] == f ? 1.0 : 0.0) * std::log(std::max(z(l, f), 1e-12));
  }
  EXPECT_NEAR(semi_supervised_loss(z, classes, mask), oracle, 1e-10);
}

TEST(SemiSupervisedLoss, ClampsLogAtFloor) {
  const Matrix z = (Matrix(1, 2) << 0.0, 1.0).finished();
  EXPECT_NEAR(semi_supervised_loss(z, std::vector<Index>{0}, std::vector<Index>{0}), -std::log(1e-12), 1e-9);
}

TEST(UnsupervisedLoss, Examples) {
  EXPECT_DOUBLE_EQ(unsupervised_loss(Matrix::Zero(6, 3), Graph(6, {}), 100.0), 36 * 0.25);

  // sigmoid(Z_0 . Z_1) rounds to exactly 1, so the edge terms vanish.
  const Graph edge(2, {{0, 1}});
  const Matrix z = (Matrix(2, 1) << 40.0, 40.0).finished();
  const double diagonal_terms = 2.0 * std::pow(1.0 / (1.0 + std::exp(-1600.0)), 2);
  EXPECT_DOUBLE_EQ(unsupervised_loss(z, edge, 100.0), diagonal_terms);
}

TEST(UnsupervisedLoss, MatchesElementwiseOracle) {
  const Graph g = testing::random_connected(5, 0.4, 3);
  const Matrix z = random_matrix(5, 3, 4, 0.7);
  double oracle = 0.0;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const double a = g.has_edge(i, j) ? 1.0 : 0.0;
      const double hat = a == 1.0 ? 50.0 : 1.0;
      const double s = 1.0 / (1.0 + std::exp(-z.row(i).dot(z.row(j))));
      oracle += std::pow((s - a) * hat, 2);
    }
  }
  EXPECT_NEAR(unsupervised_loss(z, g, 50.0), oracle, 1e-8);
}

TEST(Regularization, Examples) {
  ModelConfig c = config({1, 1}, false, Activation::tanh);
  EXPECT_EQ(regularization(Model(c, {Matrix::Zero(1, 1)}), 0.5), 0.0);
  EXPECT_EQ(regularization(Model(c, {Matrix::Constant(1, 1, 2.0)}), 0.5), 2.0);

  const Model m(config({5, 4, 3}, true, Activation::tanh));
  double squares = 0.0;
  for (const Matrix& w : m.weights())
    for (Index i = 0; i < w.size(); ++i) squares += w.data()[i] * w.data()[i];
  EXPECT_NEAR(regularization(m, 5e-4), 5e-4 * squares, 1e-15);
}

TEST(Backward, ZeroWeightsLeaveOnlyRegularization) {
  const Graph g = testing::random_connected(6, 0.4, 1);
  const PropagationGraph pg = plain_propagation(g);
  for (LossKind kind : {LossKind::semi_supervised, LossKind::unsupervised}) {
    const bool semi = kind == LossKind::semi_supervised;
    ModelConfig c = config({4, 3, 2}, true, semi ? Activation::softmax : Activation::tanh);
    Model model(c, {Matrix::Zero(4, 3), Matrix::Zero(6, 2)});
    const std::vector<Index> classes{0, 1, 0, 1, 0, 1};
    const std::vector<Index> mask{0, 1, 2};
    Objective obj{.kind = kind, .classes = classes, .mask = mask, .target = &g};
    const LossGradient grad = backward(model, forward(model, random_matrix(6, 4, 2), pg), pg, obj);
    for (const Matrix& w : grad.weights) EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(grad.regularization, 0.0);
  }
}

TEST(Backward, ShapesAndStaleTrace) {
  const Graph g = testing::random_connected(6, 0.4, 1);
  const PropagationGraph pg = plain_propagation(g);
  Model model(config({4, 3, 3, 2}, true, Activation::tanh));
  const ForwardTrace trace = forward(model, random_matrix(6, 4, 2), pg);
  Objective obj{.kind = LossKind::unsupervised, .target = &g};
  const LossGradient grad = backward(model, trace, pg, obj);
  for (int k = 0; k < model.layers(); ++k) {
    EXPECT_EQ(grad.weights[k].rows(), model.weights()[k].rows());
    EXPECT_EQ(grad.weights[k].cols(), model.weights()[k].cols());
  }
  model.mutable_weights()[0](0, 0) += 1.0;
  EXPECT_THROW(backward(model, trace, pg, obj), ConfigError);
}

// 6-vertex graph, widths [4, 3, 2], both losses, attention on and off.
TEST(Backward, FiniteDifferenceFixedShape) {
  const Graph g = testing::random_connected(6, 0.4, 11);
  std::vector<bool> is_hub(6, false);
  is_hub[2] = true;
  const PropagationGraph pg = plain_propagation(g, is_hub);
  const Matrix x = random_matrix(6, 4, 12);
  const std::vector<Index> classes{0, 1, 1, 0, 1, 0};
  const std::vector<Index> mask{0, 1, 3, 4};
  for (bool attention : {false, true}) {
    for (LossKind kind : {LossKind::semi_supervised, LossKind::unsupervised}) {
      const ModelConfig c = config({4, 3, 2}, attention,
                                   kind == LossKind::semi_supervised ? Activation::softmax : Activation::tanh);
      Model model(c);
      for (Matrix& w : model.mutable_weights()) w *= 2.0;
      Objective obj{.kind = kind, .classes = classes, .mask = mask, .target = &g};
      const LossGradient grad = backward(model, forward(model, x, pg), pg, obj);
      auto f = [&](const std::vector<Matrix>& weights) {
        const Model probe(c, weights);
        return objective_value(probe, forward(probe, x, pg), obj);
      };
      const double err = testing::gradient_relative_error(grad.weights, testing::finite_difference(model.weights(), f));
      EXPECT_LT(err, 1e-4) << "attention " << attention << " loss " << static_cast<int>(kind);
    }
  }
}

TEST(Backward, FiniteDifferenceRandomGrid) {
  std::uint64_t seed = 1;
  for (int layers : {1, 2, 3}) {
    for (bool attention : {false, true}) {
      for (bool transform : {false, true}) {
        for (LossKind kind : {LossKind::semi_supervised, LossKind::unsupervised}) {
          const auto instance = testing::random_gradient_instance(seed++, layers, attention, transform, kind);
          EXPECT_LT(testing::gradient_check(instance), 1e-4)
              << "K=" << layers << " attention=" << attention << " transform=" << transform;
        }
      }
    }
  }
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  std::vector<Matrix> params{(Matrix(1, 3) << 1.0, -2.0, 0.5).finished()};
  const std::vector<Matrix> grads{(Matrix(1, 3) << 0.3, -4.0, 1e-3).finished()};
  Adam adam({.learning_rate = 0.1}, params);
  adam.step(params, grads);
  EXPECT_NEAR(params[0](0, 0), 1.0 - 0.1, 1e-6);
  EXPECT_NEAR(params[0](0, 1), -2.0 + 0.1, 1e-6);
  EXPECT_NEAR(params[0](0, 2), 0.5 - 0.1, 1e-4);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(Adam, ZeroGradientKeepsParameters) {
  std::vector<Matrix> params{Matrix::Constant(2, 2, 0.7)};
  const std::vector<Matrix> zero{Matrix::Zero(2, 2)};
  Adam adam({}, params);
  for (int i = 0; i < 20; ++i) adam.step(params, zero);
  EXPECT_EQ(params[0], Matrix::Constant(2, 2, 0.7));
}

TEST(Adam, ThreeStepScalarTrace) {
  const double lr = 0.05, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double g[3] = {0.5, -1.0, 2.0};
  double x = 1.0, m = 0.0, v = 0.0;
  std::vector<Matrix> params{Matrix::Constant(1, 1, 1.0)};
  Adam adam({.learning_rate = lr}, params);
  for (int t = 1; t <= 3; ++t) {
    m = b1 * m + (1 - b1) * g[t - 1];
    v = b2 * v + (1 - b2) * g[t - 1] * g[t - 1];
    x -= lr * (m / (1 - std::pow(b1, t))) / (std::sqrt(v / (1 - std::pow(b2, t))) + eps);
    adam.step(params, {Matrix::Constant(1, 1, g[t - 1])});
    EXPECT_NEAR(params[0](0, 0), x, 1e-15) << "step " << t;
  }
  EXPECT_NEAR(adam.first_moment()[0](0, 0), m, 1e-15);
  EXPECT_NEAR(adam.second_moment()[0](0, 0), v, 1e-15);
}

// Two joined stars; each leaf's class is its hub.
struct DoubleStar {
  Graph graph;
  LabelVector labels;
  DataSplit split;
};

DoubleStar double_star() {
  std::vector<Edge> edges{{0, 1}};
  for (Index leaf = 2; leaf < 8; ++leaf) edges.push_back({0, leaf});
  for (Index leaf = 8; leaf < 14; ++leaf) edges.push_back({1, leaf});
  DoubleStar ds{Graph(14, edges), {}, {}};
  for (Index i = 0; i < 14; ++i) {
    const Index cls = (i == 0 || (i >= 2 && i < 8)) ? 0 : 1;
    ds.labels.classes.push_back(cls);
    ds.labels.labeled.push_back(i);
  }
  ds.labels.num_classes = 2;
  ds.split.train = ds.labels.labeled;
  return ds;
}

TEST(Train, StarToyReachesPerfectTrainingAccuracy) {
  const DoubleStar ds = double_star();
  std::vector<bool> is_hub(14, false);
  is_hub[0] = is_hub[1] = true;
  const PropagationGraph pg = plain_propagation(ds.graph, is_hub);
  const Matrix x = Matrix::Identity(14, 14);
  TrainOptions opts;
  opts.iterations = 200;
  const TrainResult r =
      train_semi_supervised(Model(config({14, 16, 2}, true, Activation::softmax, 0.5)), x, pg, ds.labels, ds.split, opts);
  ASSERT_EQ(r.history.size(), 200u);
  for (const HistoryRow& row : r.history) EXPECT_TRUE(std::isfinite(row.train_loss));
  const Matrix z = forward(r.model, x, pg).output();
  EXPECT_EQ(accuracy(z, ds.labels.classes, ds.split.train), 1.0);
  EXPECT_EQ(r.best_val_metric, 1.0);
}

TEST(Train, SameSeedSameHistory) {
  const DoubleStar ds = double_star();
  const PropagationGraph pg = plain_propagation(ds.graph);
  const Matrix x = Matrix::Identity(14, 14);
  TrainOptions opts;
  opts.iterations = 30;
  auto run = [&] {
    return train_unsupervised(Model(config({14, 8, 4}, true, Activation::tanh, 0.5, 9)), x, pg, ds.graph, opts);
  };
  const TrainResult a = run();
  const TrainResult b = run();
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].train_loss, b.history[i].train_loss);
  EXPECT_EQ(a.model.weights()[1], b.model.weights()[1]);
}

TEST(Train, UnsupervisedStopsOnFlatWindow) {
  const DoubleStar ds = double_star();
  const PropagationGraph pg = plain_propagation(ds.graph);
  TrainOptions opts;
  opts.iterations = 500;
  opts.tolerance = 0.5;  // any window changes less than 50%
  const TrainResult r = train_unsupervised(Model(config({14, 4, 2}, false, Activation::tanh)),
                                           Matrix::Identity(14, 14), pg, ds.graph, opts);
  EXPECT_LT(r.history.size(), 500u);
  EXPECT_GT(r.history.size(), 10u);
}

TEST(Train, AttentionRowsSumToOneEveryIteration) {
  const DoubleStar ds = double_star();
  std::vector<bool> is_hub(14, false);
  is_hub[0] = true;
  const PropagationGraph pg = plain_propagation(ds.graph, is_hub);
  double worst = 0.0;
  TrainOptions opts;
  opts.iterations = 25;
  opts.observer = [&](int, const ForwardTrace& trace) {
    for (std::size_t k = 0; k + 1 < trace.layers.size(); ++k) {
      const auto& a = trace.layers[k].attention;
      for (Index i = 0; i < 14; ++i) {
        double sum = 0.0;
        for (Index m = pg.support.offsets[i]; m < pg.support.offsets[i + 1]; ++m) sum += a[m];
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  };
  train_semi_supervised(Model(config({14, 6, 5, 2}, true, Activation::softmax, 0.5)), Matrix::Identity(14, 14), pg,
                        ds.labels, ds.split, opts);
  EXPECT_LT(worst, 1e-12);
}

TEST(Train, Guards) {
  const DoubleStar ds = double_star();
  const PropagationGraph pg = plain_propagation(ds.graph);
  TrainOptions opts;
  opts.iterations = 0;
  const Model softmax(config({14, 4, 2}, false, Activation::softmax));
  EXPECT_THROW(train_semi_supervised(softmax, Matrix::Identity(14, 14), pg, ds.labels, ds.split, opts), ConfigError);
  opts.iterations = 5;
  const Model tanh(config({14, 4, 2}, false, Activation::tanh));
  EXPECT_THROW(train_semi_supervised(tanh, Matrix::Identity(14, 14), pg, ds.labels, ds.split, opts), ConfigError);
  Matrix nan_x = Matrix::Identity(14, 14);
  nan_x(3, 3) = std::nan("");
  EXPECT_THROW(train_unsupervised(tanh, nan_x, pg, ds.graph, opts), NumericError);
}

TEST(Model, ConstructionChecks) {
  EXPECT_THROW(Model(config({4}, false, Activation::tanh)), ConfigError);
  EXPECT_THROW(Model(config({4, 0}, false, Activation::tanh)), ConfigError);
  EXPECT_THROW(Model(config({4, 2}, false, Activation::tanh, 0.0)), ConfigError);
  EXPECT_THROW(Model(config({4, 3, 2}, true, Activation::tanh), {Matrix::Zero(4, 3), Matrix::Zero(3, 2)}),
               ConfigError);
  const Model m(config({10, 6, 2}, true, Activation::tanh));
  EXPECT_LE(m.weights()[0].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 16.0));
  EXPECT_LE(m.weights()[1].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 14.0));
  EXPECT_EQ(Model(config({10, 6, 2}, true, Activation::tanh)).weights()[0], m.weights()[0]);
}

}  // namespace
}  // namespace cengcn
