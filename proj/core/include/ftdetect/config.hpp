#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ftdetect/corpus.hpp"
#include "ftdetect/network.hpp"
#include "ftdetect/vocabulary.hpp"

namespace ftdetect {

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
/// Keys must be unique.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  std::string get_string(std::string_view key, std::string fallback) const;
  double get_real(std::string_view key, double fallback) const;
  std::uint64_t get_count(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<std::size_t> get_counts(std::string_view key,
                                      std::vector<std::size_t> fallback) const;

  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// Settings for the train command beyond the corpus: vocabulary thresholds,
/// network shape and optimizer.
struct TrainingOptions {
  VocabularySettings vocabulary;
  std::vector<std::size_t> hidden{1000, 800, 700};
  double dropout_rate = 0.5;
  Activation activation = Activation::kRelu;
  TrainConfig train;
  /// Trim affixes when featurizing the training split.
  bool trim_training_features = true;

  Architecture architecture(std::size_t input_dim, std::size_t output_dim) const;
  bool operator==(const TrainingOptions&) const = default;
};

/// Recognized keys:
///   corpus:   min_ext_freq, max_nonprintable_ratio, train_fraction,
///             validation_fraction, test_fraction, vocab_fraction, seed
///   training: token_threshold, bigram_threshold, trim_head, trim_tail,
///             trim_training_features, hidden, dropout_rate, activation,
///             learning_rate, epochs, batch_size, adam_beta1, adam_beta2,
///             adam_epsilon, seed
/// Any other key is a UsageError.
CorpusConfig corpus_config_from(const KeyValueConfig& config);
TrainingOptions training_options_from(const KeyValueConfig& config);

std::string format_corpus_config(const CorpusConfig& config);
std::string format_training_options(const TrainingOptions& options);

}  // namespace ftdetect
