#include "ftdetect/vocabulary.hpp"

#include <algorithm>
#include <set>

#include "ftdetect/digest.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"

namespace ftdetect {

namespace {

constexpr std::string_view kVocabularyMagic = "ftdetect-vocabulary";
constexpr std::uint64_t kVocabularyVersion = 1;

template <typename T>
void sort_unique(std::vector<T>& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

/// Token ids of the trimmed stream with OOV tokens replaced by the UNK id.
std::vector<std::size_t> substituted_ids(const TokenStream& stream,
                                         const Vocabulary& vocab,
                                         TrimSettings trim) {
  const TokenStream trimmed = trim_affixes(stream, trim.head, trim.tail);
  std::vector<std::size_t> ids;
  ids.reserve(trimmed.size());
  for (const auto& token : trimmed.tokens) ids.push_back(vocab.token_id(token));
  return ids;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<Bigram> bigrams, VocabularySettings settings)
    : tokens_(std::move(tokens)),
      bigrams_(std::move(bigrams)),
      settings_(settings) {
  sort_unique(tokens_);
  sort_unique(bigrams_);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto& token = tokens_[i];
    if (token.empty()) throw DataError("vocabulary contains an empty token");
    if (token == kUnkToken) {
      throw DataError("vocabulary token collides with the UNK marker");
    }
    token_index_.emplace(token, i);
  }

  const auto component_id = [this](const std::string& token) {
    if (token == kUnkToken) return unk_index();
    const auto it = token_index_.find(token);
    if (it == token_index_.end()) {
      throw DataError("bigram component '" + escape_field(token) +
                      "' is not in the token vocabulary");
    }
    return it->second;
  };
  for (std::size_t i = 0; i < bigrams_.size(); ++i) {
    const std::size_t first = component_id(bigrams_[i].first);
    const std::size_t second = component_id(bigrams_[i].second);
    if (first == unk_index() && second == unk_index()) {
      throw DataError("(UNK, UNK) cannot be a bigram vocabulary entry");
    }
    bigram_index_.emplace(pair_key(first, second), bigram_offset() + i);
  }
}

std::size_t Vocabulary::token_id(std::string_view token) const {
  const auto it = token_index_.find(token);
  return it == token_index_.end() ? unk_index() : it->second;
}

std::size_t Vocabulary::bigram_index(std::size_t first_id,
                                     std::size_t second_id) const {
  const auto it = bigram_index_.find(pair_key(first_id, second_id));
  return it == bigram_index_.end() ? unk2_index() : it->second;
}

std::string Vocabulary::feature_name(std::size_t index) const {
  if (index < tokens_.size()) return tokens_[index];
  if (index == unk_index()) return std::string(kUnkToken);
  if (index == unk2_index()) return "<UNK2>";
  if (index < unk2_index()) {
    const auto& [first, second] = bigrams_[index - bigram_offset()];
    return first + " " + second;
  }
  throw DataError("feature index " + std::to_string(index) + " out of range");
}

ClassStreams group_token_streams(std::span<const CorpusEntry> entries,
                                 std::size_t num_classes) {
  ClassStreams streams(num_classes);
  for (const auto& entry : entries) {
    if (entry.label >= num_classes) {
      throw DataError("entry '" + entry.path + "' has out-of-range label");
    }
    streams[entry.label].push_back(tokenize_content(entry.content));
  }
  return streams;
}

std::vector<FrequencyTable> class_token_frequencies(const ClassStreams& streams,
                                                    TrimSettings trim) {
  if (streams.empty()) throw DataError("no classes to count token frequencies for");
  std::vector<FrequencyTable> tables;
  tables.reserve(streams.size());
  for (std::size_t c = 0; c < streams.size(); ++c) {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& stream : streams[c]) {
      const TokenStream trimmed = trim_affixes(stream, trim.head, trim.tail);
      for (const auto& token : trimmed.tokens) ++counts[token];
      total += trimmed.size();
    }
    if (total == 0) {
      throw DataError("class " + std::to_string(c) +
                      " has no tokens left after affix trimming");
    }
    FrequencyTable table;
    for (const auto& [token, count] : counts) {
      table.emplace(token, static_cast<double>(count) / static_cast<double>(total));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

std::vector<std::string> build_token_vocab(std::span<const FrequencyTable> freqs,
                                           double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw UsageError("token threshold must lie in (0, 1)");
  }
  std::set<std::string> selected;
  for (const auto& table : freqs) {
    for (const auto& [token, frequency] : table) {
      if (frequency > threshold) selected.insert(token);
    }
  }
  if (selected.empty()) throw DataError("token vocabulary is empty");
  return {selected.begin(), selected.end()};
}

std::vector<Bigram> build_bigram_vocab(const ClassStreams& streams,
                                       std::span<const std::string> tokens,
                                       double threshold, TrimSettings trim) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw UsageError("bigram threshold must lie in (0, 1)");
  }
  if (tokens.empty()) throw DataError("bigram vocabulary needs a token vocabulary");
  const Vocabulary lookup({tokens.begin(), tokens.end()}, {});
  const std::size_t unk = lookup.unk_index();

  std::set<std::pair<std::size_t, std::size_t>> selected;
  for (const auto& class_streams : streams) {
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& stream : class_streams) {
      const auto ids = substituted_ids(stream, lookup, trim);
      for (std::size_t i = 1; i < ids.size(); ++i) ++counts[{ids[i - 1], ids[i]}];
      if (ids.size() > 1) total += ids.size() - 1;
    }
    for (const auto& [pair, count] : counts) {
      if (pair.first == unk && pair.second == unk) continue;
      if (static_cast<double>(count) / static_cast<double>(total) > threshold) {
        selected.insert(pair);
      }
    }
  }

  const auto name = [&](std::size_t id) {
    return id == unk ? std::string(kUnkToken) : lookup.tokens()[id];
  };
  std::vector<Bigram> bigrams;
  bigrams.reserve(selected.size());
  for (const auto& [first, second] : selected) {
    bigrams.emplace_back(name(first), name(second));
  }
  std::sort(bigrams.begin(), bigrams.end());
  return bigrams;
}

Vocabulary build_vocabulary(std::span<const CorpusEntry> vocab_subset,
                            std::size_t num_classes,
                            const VocabularySettings& settings) {
  const ClassStreams streams = group_token_streams(vocab_subset, num_classes);
  for (std::size_t c = 0; c < streams.size(); ++c) {
    if (streams[c].empty()) {
      throw DataError("class " + std::to_string(c) +
                      " has no files in the vocabulary subset");
    }
  }
  const auto freqs = class_token_frequencies(streams, settings.trim);
  auto tokens = build_token_vocab(freqs, settings.token_threshold);
  auto bigrams =
      build_bigram_vocab(streams, tokens, settings.bigram_threshold, settings.trim);
  return Vocabulary(std::move(tokens), std::move(bigrams), settings);
}

std::string serialize_vocabulary(const Vocabulary& vocab) {
  const auto& s = vocab.settings();
  std::string out;
  out += std::string(kVocabularyMagic) + "\t" + std::to_string(kVocabularyVersion) + "\n";
  out += "tokens\t" + std::to_string(vocab.tokens().size()) + "\n";
  out += "bigrams\t" + std::to_string(vocab.bigrams().size()) + "\n";
  out += "token_threshold\t" + format_real(s.token_threshold) + "\n";
  out += "bigram_threshold\t" + format_real(s.bigram_threshold) + "\n";
  out += "trim\t" + std::to_string(s.trim.head) + "\t" + std::to_string(s.trim.tail) + "\n";
  for (const auto& token : vocab.tokens()) out += escape_field(token) + "\n";
  for (const auto& [first, second] : vocab.bigrams()) {
    out += escape_field(first) + "\t" + escape_field(second) + "\n";
  }
  return out;
}

namespace {

std::string_view header_value(LineReader& reader, std::string_view key) {
  const auto fields = split_tabs(reader.next());
  if (fields.size() != 2 || fields[0] != key) {
    throw DataError("vocabulary header: expected '" + std::string(key) + "' on line " +
                    std::to_string(reader.line_number()));
  }
  return fields[1];
}

}  // namespace

Vocabulary parse_vocabulary(std::string_view text) {
  LineReader reader(text);
  const auto version = parse_count(header_value(reader, kVocabularyMagic));
  if (version != kVocabularyVersion) {
    throw DataError("unsupported vocabulary format version " + std::to_string(version));
  }
  const auto n_tokens = parse_count(header_value(reader, "tokens"));
  const auto n_bigrams = parse_count(header_value(reader, "bigrams"));
  VocabularySettings settings;
  settings.token_threshold = parse_real(header_value(reader, "token_threshold"));
  settings.bigram_threshold = parse_real(header_value(reader, "bigram_threshold"));
  {
    const auto fields = split_tabs(reader.next());
    if (fields.size() != 3 || fields[0] != "trim") {
      throw DataError("vocabulary header: expected 'trim'");
    }
    settings.trim.head = parse_count(fields[1]);
    settings.trim.tail = parse_count(fields[2]);
  }

  std::vector<std::string> tokens;
  tokens.reserve(n_tokens);
  for (std::uint64_t i = 0; i < n_tokens; ++i) {
    tokens.push_back(unescape_field(reader.next()));
  }
  std::vector<Bigram> bigrams;
  bigrams.reserve(n_bigrams);
  for (std::uint64_t i = 0; i < n_bigrams; ++i) {
    const auto fields = split_tabs(reader.next());
    if (fields.size() != 2) {
      throw DataError("malformed bigram on line " + std::to_string(reader.line_number()));
    }
    bigrams.emplace_back(unescape_field(fields[0]), unescape_field(fields[1]));
  }
  if (!reader.done()) throw DataError("trailing data after vocabulary");

  Vocabulary vocab(std::move(tokens), std::move(bigrams), settings);
  if (vocab.tokens().size() != n_tokens || vocab.bigrams().size() != n_bigrams) {
    throw DataError("vocabulary entries are duplicated");
  }
  return vocab;
}

std::string vocabulary_digest(const Vocabulary& vocab) {
  return sha256_hex(serialize_vocabulary(vocab));
}

}  // namespace ftdetect
