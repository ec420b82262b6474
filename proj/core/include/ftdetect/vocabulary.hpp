#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ftdetect/corpus.hpp"
#include "ftdetect/tokenizer.hpp"

namespace ftdetect {

/// Name of the out-of-vocabulary token inside bigrams and dumps. A real token
/// can never equal it: it mixes punctuation with letters.
inline constexpr std::string_view kUnkToken = "<UNK>";

using Bigram = std::pair<std::string, std::string>;

struct VocabularySettings {
  double token_threshold = 1e-2;
  double bigram_threshold = 1e-3;
  TrimSettings trim;

  bool operator==(const VocabularySettings&) const = default;
};

/// Token vocabulary V, bigram vocabulary V2 and the fixed feature layout
///
///   [0, |V|)                 tokens, sorted
///   |V|                      UNK
///   [|V|+1, |V|+1+|V2|)      bigrams, sorted by (first, second)
///   |V|+1+|V2|               UNK2
///
/// Bigram components are tokens of V or kUnkToken; (UNK, UNK) is not allowed
/// because it always falls into UNK2.
class Vocabulary {
 public:
  Vocabulary() : Vocabulary({}, {}) {}
  /// Sorts and deduplicates both lists. Throws DataError on empty tokens,
  /// on tokens spelled like kUnkToken, on bigrams with components outside
  /// V + {UNK}, or on the (UNK, UNK) bigram.
  Vocabulary(std::vector<std::string> tokens, std::vector<Bigram> bigrams,
             VocabularySettings settings = {});

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<Bigram>& bigrams() const { return bigrams_; }
  const VocabularySettings& settings() const { return settings_; }

  std::size_t dimension() const { return tokens_.size() + bigrams_.size() + 2; }
  std::size_t unk_index() const { return tokens_.size(); }
  std::size_t unk2_index() const { return dimension() - 1; }
  std::size_t bigram_offset() const { return tokens_.size() + 1; }

  /// Feature index of a token, or unk_index() for OOV tokens. The same value
  /// doubles as the token's id in the UNK-substituted stream.
  std::size_t token_id(std::string_view token) const;

  /// Feature index of the bigram of two substituted ids, or unk2_index().
  std::size_t bigram_index(std::size_t first_id, std::size_t second_id) const;

  /// Name of a feature index ("<UNK>", "<UNK2>", a token or "a b").
  std::string feature_name(std::size_t index) const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && bigrams_ == other.bigrams_ &&
           settings_ == other.settings_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::uint64_t pair_key(std::size_t first_id, std::size_t second_id) const {
    return static_cast<std::uint64_t>(first_id) * (tokens_.size() + 1) + second_id;
  }

  std::vector<std::string> tokens_;
  std::vector<Bigram> bigrams_;
  VocabularySettings settings_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> token_index_;
  std::unordered_map<std::uint64_t, std::size_t> bigram_index_;
};

/// Untrimmed token streams grouped by class id.
using ClassStreams = std::vector<std::vector<TokenStream>>;

ClassStreams group_token_streams(std::span<const CorpusEntry> entries,
                                 std::size_t num_classes);

using FrequencyTable = std::map<std::string, double>;

/// Pooled per-class token frequencies over trimmed streams: occurrences of a
/// token across the class divided by the class's total token count.
std::vector<FrequencyTable> class_token_frequencies(const ClassStreams& streams,
                                                    TrimSettings trim);

/// Tokens whose frequency exceeds `threshold` in at least one class, sorted.
std::vector<std::string> build_token_vocab(std::span<const FrequencyTable> freqs,
                                           double threshold = 1e-2);

/// Bigrams of the UNK-substituted, trimmed streams whose per-class frequency
/// exceeds `threshold` in at least one class, sorted. (UNK, UNK) is skipped.
std::vector<Bigram> build_bigram_vocab(const ClassStreams& streams,
                                       std::span<const std::string> tokens,
                                       double threshold, TrimSettings trim);

/// Full vocabulary build over the vocabulary subset of a corpus split.
Vocabulary build_vocabulary(std::span<const CorpusEntry> vocab_subset,
                            std::size_t num_classes,
                            const VocabularySettings& settings = {});

std::string serialize_vocabulary(const Vocabulary& vocab);
Vocabulary parse_vocabulary(std::string_view text);

/// SHA-256 (hex) of serialize_vocabulary(vocab).
std::string vocabulary_digest(const Vocabulary& vocab);

}  // namespace ftdetect
