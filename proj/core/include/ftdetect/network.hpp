#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftdetect/corpus.hpp"
#include "ftdetect/features.hpp"
#include "ftdetect/rng.hpp"
#include "ftdetect/vocabulary.hpp"

namespace ftdetect {

enum class Activation { kRelu, kTanh };

std::string_view activation_name(Activation activation);
Activation parse_activation(std::string_view name);

/// Fully connected topology: input -> hidden... -> softmax output.
struct Architecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden{1000, 800, 700};
  std::size_t output_dim = 0;
  double dropout_rate = 0.5;
  Activation hidden_activation = Activation::kRelu;

  /// Throws UsageError for zero widths or a dropout rate outside [0, 1).
  void validate() const;
  std::size_t num_layers() const { return hidden.size() + 1; }

  bool operator==(const Architecture&) const = default;
};

/// One affine layer. `weights` is fan_in x fan_out, row-major, so row i holds
/// the outgoing weights of input unit i.
struct Layer {
  std::size_t fan_in = 0;
  std::size_t fan_out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& weight(std::size_t in, std::size_t out) { return weights[in * fan_out + out]; }
  double weight(std::size_t in, std::size_t out) const { return weights[in * fan_out + out]; }

  bool operator==(const Layer&) const = default;
};

struct ModelParameters {
  Architecture architecture;
  std::vector<Layer> layers;
  /// Digest of the vocabulary the input layer was trained against.
  std::string vocab_digest;
  LabelMap labels;

  /// Shapes chain and every value is finite. Throws ModelError otherwise.
  void validate() const;
  std::size_t parameter_count() const;

  bool operator==(const ModelParameters&) const = default;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t epochs = 8;
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// He-uniform weights (zero mean, variance 2 / fan_in), zero biases.
ModelParameters init_parameters(const Architecture& arch, std::uint64_t seed);

enum class Mode { kTrain, kInfer };

struct ForwardPass {
  /// Post-activation, post-dropout output of each hidden layer.
  std::vector<std::vector<double>> hidden;
  /// Pre-activation of each hidden layer.
  std::vector<std::vector<double>> pre_activation;
  /// Per-unit dropout multiplier (0 or 1 / (1 - rate)); empty when unmasked.
  std::vector<std::vector<double>> masks;
  std::vector<double> logits;
  std::vector<double> probabilities;
};

/// Max-shifted softmax.
std::vector<double> softmax(std::span<const double> logits);

/// Train mode applies inverted dropout drawn from `rng` (required when the
/// dropout rate is positive); infer mode is deterministic.
ForwardPass forward(const ModelParameters& params, std::span<const double> x,
                    Mode mode, Rng* rng = nullptr);

/// Categorical cross entropy against a one-hot label: -ln(max(p, 1e-12)).
double cross_entropy(std::span<const double> probabilities, ClassId label);

inline constexpr double kProbabilityFloor = 1e-12;

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;
  double mean_loss = 0.0;

  static Gradients zeros_like(const ModelParameters& params);
};

/// Mean gradient of the batch loss. Each sample's dropout masks come from its
/// own forward pass; samples are reduced sequentially in batch order, which
/// keeps the result bit-reproducible.
Gradients gradients(const ModelParameters& params,
                    std::span<const FeatureVector* const> batch, Mode mode,
                    Rng* rng = nullptr);
Gradients gradients(const ModelParameters& params,
                    std::span<const FeatureVector> batch, Mode mode,
                    Rng* rng = nullptr);

struct AdamState {
  std::vector<std::vector<double>> m_weights, v_weights, m_bias, v_bias;
  std::uint64_t step = 0;

  static AdamState zeros_like(const ModelParameters& params);
  bool operator==(const AdamState&) const = default;
};

/// One bias-corrected Adam update; advances state.step.
void adam_step(ModelParameters& params, const Gradients& grads,
               AdamState& state, const TrainConfig& config);

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_accuracy = 0.0;

  bool operator==(const EpochMetrics&) const = default;
};

struct TrainResult {
  ModelParameters params;
  std::vector<EpochMetrics> log;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Fixed-length minibatch training: the train set is reshuffled every epoch,
/// and after each epoch the mean training loss and validation accuracy are
/// recorded. Seeds for init, shuffling and dropout derive from config.seed.
TrainResult train(std::span<const FeatureVector> train_set,
                  std::span<const FeatureVector> validation_set,
                  const Architecture& arch, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

struct Prediction {
  std::vector<double> probabilities;
  ClassId predicted = 0;
  /// Up to five (class, normalized probability) pairs, best first.
  std::vector<std::pair<ClassId, double>> top;
};

/// Indices of the k largest probabilities (ties to the lower class id),
/// with their raw probabilities. k saturates at the class count.
std::vector<std::pair<ClassId, double>> top_k(std::span<const double> probabilities,
                                              std::size_t k);

/// Top-k pairs rescaled so their probabilities sum to 1.
std::vector<std::pair<ClassId, double>> normalize_top(
    std::vector<std::pair<ClassId, double>> top);

Prediction predict_features(const ModelParameters& params,
                            std::span<const double> x, std::size_t k = 5);

/// Throws ModelError unless `vocab` is the vocabulary the parameters were
/// trained against.
void check_vocabulary(const ModelParameters& params, const Vocabulary& vocab);

/// Featurizes without trimming and runs inference. Throws ModelError when the
/// vocabulary does not match params.vocab_digest and DataError for content
/// without tokens.
Prediction predict(const ModelParameters& params, std::string_view content,
                   const Vocabulary& vocab, std::size_t k = 5);

/// predict() without the per-call vocabulary check, for batch use after a
/// single check_vocabulary().
Prediction predict_unchecked(const ModelParameters& params,
                             std::string_view content, const Vocabulary& vocab,
                             std::size_t k = 5);

double accuracy(const ModelParameters& params,
                std::span<const FeatureVector> samples);

}  // namespace ftdetect
