#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ftdetect/error.hpp"
#include "ftdetect/network.hpp"
#include "oracles.hpp"

using namespace ftdetect;

namespace {

Architecture tiny(std::size_t in, std::vector<std::size_t> hidden, std::size_t out,
                  double dropout = 0.0, Activation act = Activation::kRelu) {
  Architecture a;
  a.input_dim = in;
  a.hidden = std::move(hidden);
  a.output_dim = out;
  a.dropout_rate = dropout;
  a.hidden_activation = act;
  return a;
}

FeatureVector sample(std::vector<double> values, ClassId label) {
  FeatureVector v;
  v.values = std::move(values);
  v.label = label;
  return v;
}

std::vector<double> random_vector(Rng& rng, std::size_t n, bool sparse = false) {
  std::vector<double> v(n);
  for (auto& x : v) x = (sparse && rng.uniform() < 0.3) ? 0.0 : rng.uniform();
  return v;
}

}  // namespace

TEST(Init, ShapesBiasesAndDeterminism) {
  const auto arch = tiny(2, {3}, 2);
  const auto p = init_parameters(arch, 9);
  ASSERT_EQ(p.layers.size(), 2u);
  EXPECT_EQ(p.layers[0].weights.size(), 6u);
  EXPECT_EQ(p.layers[0].fan_in, 2u);
  EXPECT_EQ(p.layers[0].fan_out, 3u);
  EXPECT_EQ(p.layers[1].weights.size(), 6u);
  EXPECT_EQ(p.layers[1].fan_in, 3u);
  EXPECT_EQ(p.layers[1].fan_out, 2u);
  for (const auto& l : p.layers) {
    for (double b : l.bias) EXPECT_EQ(b, 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(l.fan_in));
    for (double w : l.weights) EXPECT_LE(std::abs(w), limit);
  }
  EXPECT_EQ(init_parameters(arch, 9), p);
  EXPECT_NE(init_parameters(arch, 10), p);
  EXPECT_NO_THROW(p.validate());
}

TEST(Init, ZeroMeanWithFanInVariance) {
  const auto p = init_parameters(tiny(400, {500}, 2), 1);
  const auto& w = p.layers[0].weights;
  const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  double var = 0;
  for (double x : w) var += (x - mean) * (x - mean);
  var /= static_cast<double>(w.size());
  EXPECT_NEAR(mean, 0.0, 0.005);
  EXPECT_NEAR(var, 2.0 / 400.0, 0.0002);
}

TEST(Architecture, Validation) {
  EXPECT_THROW(tiny(0, {2}, 2).validate(), UsageError);
  EXPECT_THROW(tiny(2, {0}, 2).validate(), UsageError);
  EXPECT_THROW(tiny(2, {2}, 2, 1.0).validate(), UsageError);
  EXPECT_NO_THROW(tiny(2, {}, 2).validate());
  TrainConfig c;
  c.epochs = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = {};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Softmax, Examples) {
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(softmax(zero), (std::vector<double>{0.5, 0.5}));
  const std::vector<double> same{3.0, 3.0, 3.0, 3.0};
  for (double p : softmax(same)) EXPECT_DOUBLE_EQ(p, 0.25);
  const std::vector<double> huge{1000.0, 0.0};
  const auto p = softmax(huge);
  EXPECT_TRUE(std::isfinite(p[0]));
  EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST(Softmax, RandomLogits) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> z(1 + rng.below(20));
    for (auto& x : z) x = (rng.uniform() - 0.5) * 100;
    const auto p = softmax(z);
    double sum = 0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
    auto shifted = z;
    for (auto& x : shifted) x += 37.5;
    const auto q = softmax(shifted);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-9);
  }
}

TEST(Forward, UniformWhenLogitsEqualAndDeterministicInInference) {
  auto p = init_parameters(tiny(3, {4}, 5), 2);
  for (auto& w : p.layers[1].weights) w = 0.0;
  const std::vector<double> x{0.2, 0.3, 0.5};
  const auto pass = forward(p, x, Mode::kInfer);
  for (double q : pass.probabilities) EXPECT_DOUBLE_EQ(q, 0.2);

  const auto q = init_parameters(tiny(3, {4, 4}, 3, 0.5), 3);
  EXPECT_EQ(forward(q, x, Mode::kInfer).probabilities, forward(q, x, Mode::kInfer).probabilities);
  EXPECT_THROW(forward(q, std::vector<double>{1.0}, Mode::kInfer), DataError);
  EXPECT_THROW(forward(q, x, Mode::kTrain), UsageError);
}

TEST(Forward, DropoutExpectationMatchesInference) {
  const auto arch = tiny(4, {6}, 2, 0.2);
  auto p = init_parameters(arch, 4);
  for (auto& w : p.layers[0].weights) w = std::abs(w);
  const std::vector<double> x{0.4, 0.1, 0.3, 0.2};
  const auto reference = forward(p, x, Mode::kInfer).hidden[0];
  std::vector<double> mean(reference.size(), 0.0);
  Rng rng(5);
  const int passes = 10000;
  for (int i = 0; i < passes; ++i) {
    const auto h = forward(p, x, Mode::kTrain, &rng).hidden[0];
    for (std::size_t j = 0; j < h.size(); ++j) mean[j] += h[j] / passes;
  }
  for (std::size_t j = 0; j < mean.size(); ++j) {
    EXPECT_NEAR(mean[j], reference[j], 0.02 * reference[j]) << "unit " << j;
  }
}

TEST(CrossEntropy, Examples) {
  EXPECT_EQ(cross_entropy(std::vector<double>{0.0, 1.0}, 1), 0.0);
  EXPECT_NEAR(cross_entropy(std::vector<double>{std::exp(-1.0), 1 - std::exp(-1.0)}, 0), 1.0,
              1e-15);
  EXPECT_NEAR(cross_entropy(std::vector<double>(4, 0.25), 2), std::log(4.0), 1e-15);
  EXPECT_NEAR(cross_entropy(std::vector<double>{1.0, 0.0}, 1), -std::log(1e-12), 1e-9);
  EXPECT_THROW(cross_entropy(std::vector<double>{1.0}, 1), DataError);
}

TEST(Gradients, FiniteDifferenceSingleSample) {
  const auto p = init_parameters(tiny(3, {}, 2), 6);
  const std::vector<FeatureVector> batch{sample({0.2, 0.5, 0.3}, 1)};
  const auto check = ftdetect::testing::check_gradients(p, batch);
  EXPECT_EQ(check.partials, 8u);
  EXPECT_LT(check.worst_relative_error, 1e-4);
}

TEST(Gradients, FiniteDifferenceRandomTinyNetworks) {
  Rng rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t in = 1 + rng.below(5), out = 2 + rng.below(4);
    std::vector<std::size_t> hidden(rng.below(3));
    for (auto& w : hidden) w = 1 + rng.below(5);
    const Activation act = trial % 2 ? Activation::kTanh : Activation::kRelu;
    auto p = init_parameters(tiny(in, hidden, out, 0.0, act), rng.next());
    for (auto& l : p.layers) {
      for (auto& b : l.bias) b = 0.1 * (rng.uniform() - 0.5);
    }
    std::vector<FeatureVector> batch;
    for (std::size_t i = 0; i < 1 + rng.below(4); ++i) {
      batch.push_back(sample(random_vector(rng, in, true), static_cast<ClassId>(rng.below(out))));
    }
    const auto check = ftdetect::testing::check_gradients(p, batch);
    EXPECT_LT(check.worst_relative_error, 1e-4) << "trial " << trial;
  }
}

TEST(Gradients, OneHotCorrectGivesNearZero) {
  auto p = init_parameters(tiny(2, {}, 2), 1);
  p.layers[0].weights = {40.0, -40.0, -40.0, 40.0};
  const std::vector<FeatureVector> batch{sample({1.0, 0.0}, 0), sample({0.0, 1.0}, 1)};
  const auto g = gradients(p, batch, Mode::kInfer);
  for (const auto& layer : g.weights) {
    for (double v : layer) EXPECT_NEAR(v, 0.0, 1e-30);
  }
  EXPECT_NEAR(g.mean_loss, 0.0, 1e-30);
  EXPECT_THROW(gradients(p, std::vector<FeatureVector>{}, Mode::kInfer), UsageError);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  const auto start = init_parameters(tiny(3, {2}, 2), 1);
  auto p = start;
  auto state = AdamState::zeros_like(p);
  adam_step(p, Gradients::zeros_like(p), state, TrainConfig{});
  EXPECT_EQ(p, start);
  EXPECT_EQ(state.step, 1u);
}

TEST(Adam, HandComputedSteps) {
  ModelParameters p;
  p.architecture = tiny(1, {}, 1);
  Layer l;
  l.fan_in = l.fan_out = 1;
  l.weights = {0.0};
  l.bias = {0.0};
  p.layers = {l};
  auto state = AdamState::zeros_like(p);
  auto g = Gradients::zeros_like(p);
  TrainConfig c;
  c.learning_rate = 0.01;

  g.weights[0][0] = 1.0;
  adam_step(p, g, state, c);
  // m = 0.1, v = 0.001; bias-corrected both give 1.
  EXPECT_NEAR(p.layers[0].weights[0], -0.01 / (1 + 1e-8), 1e-15);
  EXPECT_EQ(p.layers[0].bias[0], 0.0);

  g.weights[0][0] = -1.0;
  adam_step(p, g, state, c);
  // m = 0.09 - 0.1 = -0.01, m_hat = -0.01 / 0.19; v_hat = 0.001999 / 0.001999 = 1
  const double expected = -0.01 / (1 + 1e-8) + 0.01 * (0.01 / 0.19) / (1 + 1e-8);
  EXPECT_NEAR(p.layers[0].weights[0], expected, 1e-15);
}

TEST(Adam, IdenticalRunsAgree) {
  Rng rng(3);
  std::vector<FeatureVector> batch;
  for (int i = 0; i < 8; ++i) batch.push_back(sample(random_vector(rng, 5), i % 3));
  const auto arch = tiny(5, {4}, 3, 0.5);
  auto run = [&] {
    auto p = init_parameters(arch, 11);
    auto s = AdamState::zeros_like(p);
    Rng drop(12);
    for (int step = 0; step < 20; ++step) {
      adam_step(p, gradients(p, batch, Mode::kTrain, &drop), s, TrainConfig{});
    }
    return p;
  };
  EXPECT_EQ(run(), run());
}

namespace {

// Two classes with disjoint token distributions: the first half of the
// features belongs to class 0, the second half to class 1.
std::vector<FeatureVector> separable(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const ClassId label = i % 2;
    std::vector<double> v(dim, 0.0);
    double sum = 0;
    for (std::size_t j = 0; j < dim / 2; ++j) {
      v[label * (dim / 2) + j] = rng.uniform();
      sum += v[label * (dim / 2) + j];
    }
    for (auto& x : v) x /= sum;
    out.push_back(sample(v, label));
  }
  return out;
}

}  // namespace

TEST(Train, FullBatchLossIsMonotoneOnSeparableData) {
  Rng rng(8);
  const auto data = separable(rng, 32, 10);
  auto p = init_parameters(tiny(10, {8, 8}, 2), 2);
  auto state = AdamState::zeros_like(p);
  double previous = INFINITY;
  for (int step = 0; step < 50; ++step) {
    const auto g = gradients(p, data, Mode::kInfer);
    EXPECT_LE(g.mean_loss, previous + 1e-9) << "step " << step;
    previous = g.mean_loss;
    adam_step(p, g, state, TrainConfig{});
  }
}

TEST(Train, SeparableToyReachesFullValidationAccuracy) {
  Rng rng(9);
  const auto train_set = separable(rng, 64, 10);
  const auto val = separable(rng, 16, 10);
  TrainConfig c;
  c.learning_rate = 1e-2;
  c.batch_size = 4;
  c.seed = 4;
  const auto result = train(train_set, val, tiny(10, {16, 8}, 2, 0.5), c);
  ASSERT_EQ(result.log.size(), 8u);
  EXPECT_EQ(result.log.back().validation_accuracy, 1.0);
  for (std::size_t i = 0; i < result.log.size(); ++i) EXPECT_EQ(result.log[i].epoch, i + 1);

  const auto again = train(train_set, val, tiny(10, {16, 8}, 2, 0.5), c);
  EXPECT_EQ(again.log, result.log);
  EXPECT_EQ(again.params, result.params);
}

TEST(Train, Preconditions) {
  Rng rng(1);
  const auto data = separable(rng, 4, 4);
  EXPECT_THROW(train({}, data, tiny(4, {2}, 2), TrainConfig{}), DataError);
  EXPECT_THROW(train(data, {}, tiny(4, {2}, 2), TrainConfig{}), DataError);
  TrainConfig zero;
  zero.epochs = 0;
  EXPECT_THROW(train(data, data, tiny(4, {2}, 2), zero), UsageError);
  EXPECT_THROW(train(data, data, tiny(5, {2}, 2), TrainConfig{}), DataError);
}

TEST(TopK, TiesAndNormalization) {
  const std::vector<double> p{0.5, 0.2, 0.1, 0.1, 0.05, 0.05};
  const auto top = top_k(p, 5);
  ASSERT_EQ(top.size(), 5u);
  EXPECT_EQ(top[4].first, 4u);
  const auto pn = normalize_top(top);
  const double expected[] = {0.5 / 0.95, 0.2 / 0.95, 0.1 / 0.95, 0.1 / 0.95, 0.05 / 0.95};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(pn[i].first, static_cast<ClassId>(i));
    EXPECT_NEAR(pn[i].second, expected[i], 1e-15);
  }
  EXPECT_NEAR(pn[0].second, 0.5263157894736842, 1e-15);

  const std::vector<double> tie{0.4, 0.4, 0.2};
  EXPECT_EQ(top_k(tie, 1).front().first, 0u);
  const auto saturated = normalize_top(top_k(tie, 5));
  ASSERT_EQ(saturated.size(), 3u);
  EXPECT_NEAR(saturated[0].second + saturated[1].second + saturated[2].second, 1.0, 1e-15);
}

TEST(PredictFeatures, ArgmaxAndTop) {
  auto p = init_parameters(tiny(2, {}, 3), 1);
  p.layers[0].weights = {1, 1, 0, 0, 0, 0};
  const auto pred = predict_features(p, std::vector<double>{1.0, 0.0}, 5);
  EXPECT_EQ(pred.predicted, 0u);
  EXPECT_EQ(pred.top.size(), 3u);
  double sum = 0;
  for (const auto& [id, pn] : pred.top) sum += pn;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}
