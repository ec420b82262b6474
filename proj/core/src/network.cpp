#include "ftdetect/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftdetect/error.hpp"

namespace ftdetect {

std::string_view activation_name(Activation activation) {
  switch (activation) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "relu";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw UsageError("unknown activation '" + std::string(name) + "'");
}

void Architecture::validate() const {
  if (input_dim == 0 || output_dim == 0) {
    throw UsageError("architecture input and output widths must be >= 1");
  }
  for (const auto width : hidden) {
    if (width == 0) throw UsageError("hidden layer widths must be >= 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw UsageError("dropout rate must lie in [0, 1)");
  }
}

void ModelParameters::validate() const {
  if (layers.size() != architecture.num_layers()) {
    throw ModelError("layer count does not match the architecture");
  }
  std::size_t fan_in = architecture.input_dim;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& layer = layers[k];
    const std::size_t fan_out =
        k < architecture.hidden.size() ? architecture.hidden[k] : architecture.output_dim;
    if (layer.fan_in != fan_in || layer.fan_out != fan_out ||
        layer.weights.size() != fan_in * fan_out || layer.bias.size() != fan_out) {
      throw ModelError("layer " + std::to_string(k) + " has the wrong shape");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      throw ModelError("layer " + std::to_string(k) + " holds non-finite values");
    }
    fan_in = fan_out;
  }
  if (!labels.empty() && labels.size() != architecture.output_dim) {
    throw ModelError("label map size does not match the output layer");
  }
}

std::size_t ModelParameters::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.bias.size();
  return n;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be > 0");
  if (epochs < 1) throw UsageError("epochs must be >= 1");
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw UsageError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw UsageError("adam_epsilon must be > 0");
}

ModelParameters init_parameters(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  Rng rng(seed);
  ModelParameters params;
  params.architecture = arch;
  std::size_t fan_in = arch.input_dim;
  for (std::size_t k = 0; k < arch.num_layers(); ++k) {
    const std::size_t fan_out = k < arch.hidden.size() ? arch.hidden[k] : arch.output_dim;
    Layer layer;
    layer.fan_in = fan_in;
    layer.fan_out = fan_out;
    layer.weights.resize(fan_in * fan_out);
    layer.bias.assign(fan_out, 0.0);
    // Uniform(-a, a) has variance a^2 / 3 = 2 / fan_in.
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * limit;
    params.layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return params;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double shift = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(logits[j] - shift);
    sum += out[j];
  }
  for (auto& p : out) p /= sum;
  return out;
}

namespace {

double activate(Activation a, double z) {
  return a == Activation::kRelu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

double activation_derivative(Activation a, double z) {
  if (a == Activation::kRelu) return z > 0.0 ? 1.0 : 0.0;
  const double t = std::tanh(z);
  return 1.0 - t * t;
}

/// out = bias + x * W, skipping zero inputs (feature vectors are sparse).
void affine(const Layer& layer, std::span<const double> x, std::vector<double>& out) {
  out.assign(layer.bias.begin(), layer.bias.end());
  for (std::size_t i = 0; i < layer.fan_in; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = &layer.weights[i * layer.fan_out];
    for (std::size_t j = 0; j < layer.fan_out; ++j) out[j] += xi * row[j];
  }
}

}  // namespace

ForwardPass forward(const ModelParameters& params, std::span<const double> x,
                    Mode mode, Rng* rng) {
  const auto& arch = params.architecture;
  if (x.size() != arch.input_dim) {
    throw DataError("feature dimension " + std::to_string(x.size()) +
                    " does not match model input " + std::to_string(arch.input_dim));
  }
  const bool masked = mode == Mode::kTrain && arch.dropout_rate > 0.0;
  if (masked && rng == nullptr) {
    throw UsageError("training-mode forward pass with dropout needs an rng");
  }
  const double keep_scale = 1.0 / (1.0 - arch.dropout_rate);

  ForwardPass pass;
  pass.hidden.resize(arch.hidden.size());
  pass.pre_activation.resize(arch.hidden.size());
  if (masked) pass.masks.resize(arch.hidden.size());

  std::span<const double> input = x;
  for (std::size_t k = 0; k < arch.hidden.size(); ++k) {
    auto& z = pass.pre_activation[k];
    affine(params.layers[k], input, z);
    auto& h = pass.hidden[k];
    h.resize(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      h[j] = activate(arch.hidden_activation, z[j]);
    }
    if (masked) {
      auto& mask = pass.masks[k];
      mask.resize(h.size());
      for (std::size_t j = 0; j < h.size(); ++j) {
        mask[j] = rng->uniform() < arch.dropout_rate ? 0.0 : keep_scale;
        h[j] *= mask[j];
      }
    }
    input = h;
  }
  affine(params.layers.back(), input, pass.logits);
  pass.probabilities = softmax(pass.logits);
  return pass;
}

double cross_entropy(std::span<const double> probabilities, ClassId label) {
  if (label >= probabilities.size()) {
    throw DataError("label " + std::to_string(label) + " out of range");
  }
  return -std::log(std::max(probabilities[label], kProbabilityFloor));
}

Gradients Gradients::zeros_like(const ModelParameters& params) {
  Gradients g;
  for (const auto& layer : params.layers) {
    g.weights.emplace_back(layer.weights.size(), 0.0);
    g.bias.emplace_back(layer.bias.size(), 0.0);
  }
  return g;
}

Gradients gradients(const ModelParameters& params,
                    std::span<const FeatureVector* const> batch, Mode mode,
                    Rng* rng) {
  if (batch.empty()) throw UsageError("gradient of an empty batch");
  const auto& arch = params.architecture;
  const std::size_t n_layers = params.layers.size();
  Gradients g = Gradients::zeros_like(params);

  std::vector<double> delta;
  std::vector<double> delta_prev;
  double loss_sum = 0.0;
  for (const FeatureVector* sample : batch) {
    if (!sample->label) throw DataError("training sample without a label");
    const ClassId label = *sample->label;
    const ForwardPass pass = forward(params, sample->values, mode, rng);
    loss_sum += cross_entropy(pass.probabilities, label);

    // Softmax + cross entropy: dL/dlogits = p - onehot.
    delta = pass.probabilities;
    delta[label] -= 1.0;

    for (std::size_t k = n_layers; k-- > 0;) {
      const Layer& layer = params.layers[k];
      std::span<const double> input =
          k == 0 ? std::span<const double>(sample->values) : pass.hidden[k - 1];
      auto& gw = g.weights[k];
      auto& gb = g.bias[k];
      for (std::size_t j = 0; j < layer.fan_out; ++j) gb[j] += delta[j];
      for (std::size_t i = 0; i < layer.fan_in; ++i) {
        const double a = input[i];
        if (a == 0.0) continue;
        double* row = &gw[i * layer.fan_out];
        for (std::size_t j = 0; j < layer.fan_out; ++j) row[j] += a * delta[j];
      }
      if (k == 0) break;

      const auto& z = pass.pre_activation[k - 1];
      delta_prev.assign(layer.fan_in, 0.0);
      for (std::size_t i = 0; i < layer.fan_in; ++i) {
        const double* row = &layer.weights[i * layer.fan_out];
        double sum = 0.0;
        for (std::size_t j = 0; j < layer.fan_out; ++j) sum += row[j] * delta[j];
        double local = activation_derivative(arch.hidden_activation, z[i]);
        if (!pass.masks.empty()) local *= pass.masks[k - 1][i];
        delta_prev[i] = sum * local;
      }
      delta.swap(delta_prev);
    }
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t k = 0; k < n_layers; ++k) {
    for (auto& v : g.weights[k]) v *= scale;
    for (auto& v : g.bias[k]) v *= scale;
  }
  g.mean_loss = loss_sum * scale;
  return g;
}

Gradients gradients(const ModelParameters& params,
                    std::span<const FeatureVector> batch, Mode mode, Rng* rng) {
  std::vector<const FeatureVector*> pointers;
  pointers.reserve(batch.size());
  for (const auto& sample : batch) pointers.push_back(&sample);
  return gradients(params, std::span<const FeatureVector* const>(pointers), mode, rng);
}

AdamState AdamState::zeros_like(const ModelParameters& params) {
  AdamState s;
  for (const auto& layer : params.layers) {
    s.m_weights.emplace_back(layer.weights.size(), 0.0);
    s.v_weights.emplace_back(layer.weights.size(), 0.0);
    s.m_bias.emplace_back(layer.bias.size(), 0.0);
    s.v_bias.emplace_back(layer.bias.size(), 0.0);
  }
  return s;
}

namespace {

void adam_update(std::vector<double>& theta, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v,
                 const TrainConfig& c, double correction1, double correction2) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m[i] = c.adam_beta1 * m[i] + (1.0 - c.adam_beta1) * grad[i];
    v[i] = c.adam_beta2 * v[i] + (1.0 - c.adam_beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    theta[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.adam_epsilon);
  }
}

}  // namespace

void adam_step(ModelParameters& params, const Gradients& grads, AdamState& state,
               const TrainConfig& config) {
  if (state.m_weights.size() != params.layers.size() ||
      grads.weights.size() != params.layers.size()) {
    throw UsageError("optimizer state does not match the parameters");
  }
  ++state.step;
  const auto t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.adam_beta1, t);
  const double correction2 = 1.0 - std::pow(config.adam_beta2, t);
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto& layer = params.layers[k];
    if (state.m_weights[k].size() != layer.weights.size() ||
        grads.weights[k].size() != layer.weights.size()) {
      throw UsageError("optimizer state does not match layer " + std::to_string(k));
    }
    adam_update(layer.weights, grads.weights[k], state.m_weights[k],
                state.v_weights[k], config, correction1, correction2);
    adam_update(layer.bias, grads.bias[k], state.m_bias[k], state.v_bias[k],
                config, correction1, correction2);
  }
}

double accuracy(const ModelParameters& params, std::span<const FeatureVector> samples) {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& sample : samples) {
    const Prediction p = predict_features(params, sample.values, 1);
    if (sample.label && p.predicted == *sample.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

TrainResult train(std::span<const FeatureVector> train_set,
                  std::span<const FeatureVector> validation_set,
                  const Architecture& arch, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  arch.validate();
  if (train_set.empty()) throw DataError("empty training set");
  if (validation_set.empty()) throw DataError("empty validation set");
  for (const auto* set : {&train_set, &validation_set}) {
    for (const auto& sample : *set) {
      if (sample.dimension() != arch.input_dim) {
        throw DataError("feature dimension does not match the architecture");
      }
      if (!sample.label || *sample.label >= arch.output_dim) {
        throw DataError("sample with a missing or out-of-range label");
      }
    }
  }

  TrainResult result;
  result.params = init_parameters(arch, sub_seed(config.seed, "init"));
  AdamState state = AdamState::zeros_like(result.params);
  Rng shuffle_rng(sub_seed(config.seed, "shuffle"));
  Rng dropout_rng(sub_seed(config.seed, "dropout"));

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const FeatureVector*> batch;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(&train_set[order[i]]);
      const Gradients g = gradients(result.params, batch, Mode::kTrain, &dropout_rng);
      loss_sum += g.mean_loss * static_cast<double>(batch.size());
      adam_step(result.params, g, state, config);
    }
    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = loss_sum / static_cast<double>(order.size());
    metrics.validation_accuracy = accuracy(result.params, validation_set);
    result.log.push_back(metrics);
    if (on_epoch) on_epoch(metrics);
  }
  return result;
}

std::vector<std::pair<ClassId, double>> top_k(std::span<const double> probabilities,
                                              std::size_t k) {
  std::vector<ClassId> ids(probabilities.size());
  std::iota(ids.begin(), ids.end(), ClassId{0});
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](ClassId a, ClassId b) {
                      if (probabilities[a] != probabilities[b]) {
                        return probabilities[a] > probabilities[b];
                      }
                      return a < b;
                    });
  std::vector<std::pair<ClassId, double>> top;
  top.reserve(k);
  for (std::size_t i = 0; i < k; ++i) top.emplace_back(ids[i], probabilities[ids[i]]);
  return top;
}

std::vector<std::pair<ClassId, double>> normalize_top(
    std::vector<std::pair<ClassId, double>> top) {
  double sum = 0.0;
  for (const auto& entry : top) sum += entry.second;
  if (sum > 0.0) {
    for (auto& entry : top) entry.second /= sum;
  }
  return top;
}

Prediction predict_features(const ModelParameters& params, std::span<const double> x,
                            std::size_t k) {
  Prediction prediction;
  prediction.probabilities = forward(params, x, Mode::kInfer).probabilities;
  auto top = top_k(prediction.probabilities, std::max<std::size_t>(k, 1));
  prediction.predicted = top.front().first;
  top.resize(std::min(top.size(), k));
  prediction.top = normalize_top(std::move(top));
  return prediction;
}

void check_vocabulary(const ModelParameters& params, const Vocabulary& vocab) {
  if (vocabulary_digest(vocab) != params.vocab_digest) {
    throw ModelError("vocabulary does not match the model parameters");
  }
  if (vocab.dimension() != params.architecture.input_dim) {
    throw ModelError("vocabulary dimension does not match the model input");
  }
}

Prediction predict_unchecked(const ModelParameters& params, std::string_view content,
                             const Vocabulary& vocab, std::size_t k) {
  const FeatureVector x = featurize(content, vocab);
  return predict_features(params, x.values, k);
}

Prediction predict(const ModelParameters& params, std::string_view content,
                   const Vocabulary& vocab, std::size_t k) {
  check_vocabulary(params, vocab);
  return predict_unchecked(params, content, vocab, k);
}

}  // namespace ftdetect
