#include "ftdetect/config.hpp"

#include <algorithm>
#include <set>

#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"
#include "ftdetect/io.hpp"

namespace ftdetect {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string_view>& known_keys() {
  static const std::set<std::string_view> keys = {
      "min_ext_freq",   "max_nonprintable_ratio", "train_fraction",
      "validation_fraction", "test_fraction",     "vocab_fraction",
      "seed",           "token_threshold",        "bigram_threshold",
      "trim_head",      "trim_tail",              "trim_training_features",
      "hidden",         "dropout_rate",           "activation",
      "learning_rate",  "epochs",                 "batch_size",
      "adam_beta1",     "adam_beta2",             "adam_epsilon",
  };
  return keys;
}

template <typename Fn>
auto convert(std::string_view key, const std::string& raw, Fn fn) {
  try {
    return fn(raw);
  } catch (const DataError&) {
    throw UsageError("config key '" + std::string(key) + "': bad value '" + raw + "'");
  }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  LineReader reader(text);
  while (!reader.done()) {
    const std::string_view line = trim(reader.next());
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(reader.line_number()) +
                       ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_keys().contains(key)) {
      throw UsageError("unknown config key '" + key + "'");
    }
    if (!config.values_.emplace(key, value).second) {
      throw UsageError("duplicate config key '" + key + "'");
    }
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  return parse(text);
}

bool KeyValueConfig::has(std::string_view key) const { return values_.contains(key); }

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_real(std::string_view key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return convert(key, it->second, [](const std::string& v) { return parse_real(v); });
}

std::uint64_t KeyValueConfig::get_count(std::string_view key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return convert(key, it->second, [](const std::string& v) { return parse_count(v); });
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw UsageError("config key '" + std::string(key) + "': expected a boolean");
}

std::vector<std::size_t> KeyValueConfig::get_counts(std::string_view key,
                                                    std::vector<std::size_t> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::size_t> out;
  std::string_view rest = it->second;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    out.push_back(convert(key, std::string(item),
                          [](const std::string& v) { return parse_count(v); }));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

Architecture TrainingOptions::architecture(std::size_t input_dim,
                                           std::size_t output_dim) const {
  Architecture arch;
  arch.input_dim = input_dim;
  arch.hidden = hidden;
  arch.output_dim = output_dim;
  arch.dropout_rate = dropout_rate;
  arch.hidden_activation = activation;
  return arch;
}

CorpusConfig corpus_config_from(const KeyValueConfig& config) {
  CorpusConfig out;
  out.min_ext_freq = config.get_real("min_ext_freq", out.min_ext_freq);
  out.max_nonprintable_ratio =
      config.get_real("max_nonprintable_ratio", out.max_nonprintable_ratio);
  out.fractions.train = config.get_real("train_fraction", out.fractions.train);
  out.fractions.validation =
      config.get_real("validation_fraction", out.fractions.validation);
  out.fractions.test = config.get_real("test_fraction", out.fractions.test);
  out.vocab_fraction = config.get_real("vocab_fraction", out.vocab_fraction);
  out.seed = config.get_count("seed", out.seed);
  if (!(out.max_nonprintable_ratio >= 0.0 && out.max_nonprintable_ratio <= 1.0)) {
    throw UsageError("max_nonprintable_ratio must lie in [0, 1]");
  }
  return out;
}

TrainingOptions training_options_from(const KeyValueConfig& config) {
  TrainingOptions out;
  auto& v = out.vocabulary;
  v.token_threshold = config.get_real("token_threshold", v.token_threshold);
  v.bigram_threshold = config.get_real("bigram_threshold", v.bigram_threshold);
  v.trim.head = config.get_count("trim_head", v.trim.head);
  v.trim.tail = config.get_count("trim_tail", v.trim.tail);
  out.trim_training_features =
      config.get_bool("trim_training_features", out.trim_training_features);
  out.hidden = config.get_counts("hidden", out.hidden);
  out.dropout_rate = config.get_real("dropout_rate", out.dropout_rate);
  if (config.has("activation")) {
    out.activation = parse_activation(config.get_string("activation", "relu"));
  }
  auto& t = out.train;
  t.learning_rate = config.get_real("learning_rate", t.learning_rate);
  t.epochs = config.get_count("epochs", t.epochs);
  t.batch_size = config.get_count("batch_size", t.batch_size);
  t.seed = config.get_count("seed", t.seed);
  t.adam_beta1 = config.get_real("adam_beta1", t.adam_beta1);
  t.adam_beta2 = config.get_real("adam_beta2", t.adam_beta2);
  t.adam_epsilon = config.get_real("adam_epsilon", t.adam_epsilon);
  t.validate();
  return out;
}

std::string format_corpus_config(const CorpusConfig& c) {
  std::string out;
  out += "min_ext_freq = " + format_real(c.min_ext_freq) + "\n";
  out += "max_nonprintable_ratio = " + format_real(c.max_nonprintable_ratio) + "\n";
  out += "train_fraction = " + format_real(c.fractions.train) + "\n";
  out += "validation_fraction = " + format_real(c.fractions.validation) + "\n";
  out += "test_fraction = " + format_real(c.fractions.test) + "\n";
  out += "vocab_fraction = " + format_real(c.vocab_fraction) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  return out;
}

std::string format_training_options(const TrainingOptions& o) {
  std::string hidden;
  for (std::size_t i = 0; i < o.hidden.size(); ++i) {
    if (i) hidden += ",";
    hidden += std::to_string(o.hidden[i]);
  }
  std::string out;
  out += "token_threshold = " + format_real(o.vocabulary.token_threshold) + "\n";
  out += "bigram_threshold = " + format_real(o.vocabulary.bigram_threshold) + "\n";
  out += "trim_head = " + std::to_string(o.vocabulary.trim.head) + "\n";
  out += "trim_tail = " + std::to_string(o.vocabulary.trim.tail) + "\n";
  out += std::string("trim_training_features = ") +
         (o.trim_training_features ? "true" : "false") + "\n";
  out += "hidden = " + hidden + "\n";
  out += "dropout_rate = " + format_real(o.dropout_rate) + "\n";
  out += "activation = " + std::string(activation_name(o.activation)) + "\n";
  out += "learning_rate = " + format_real(o.train.learning_rate) + "\n";
  out += "epochs = " + std::to_string(o.train.epochs) + "\n";
  out += "batch_size = " + std::to_string(o.train.batch_size) + "\n";
  out += "seed = " + std::to_string(o.train.seed) + "\n";
  out += "adam_beta1 = " + format_real(o.train.adam_beta1) + "\n";
  out += "adam_beta2 = " + format_real(o.train.adam_beta2) + "\n";
  out += "adam_epsilon = " + format_real(o.train.adam_epsilon) + "\n";
  return out;
}

}  // namespace ftdetect
