#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ftdetect/corpus.hpp"
#include "ftdetect/tokenizer.hpp"
#include "ftdetect/vocabulary.hpp"

namespace ftdetect {

/// Dense frequency vector over the vocabulary's feature layout.
struct FeatureVector {
  std::vector<double> values;
  std::optional<ClassId> label;

  std::size_t dimension() const { return values.size(); }
  bool operator==(const FeatureVector&) const = default;
};

struct FeaturizeOptions {
  /// Affix trimming before counting; prediction never trims.
  std::optional<TrimSettings> trim;
};

/// Token block: frequency of each V token among the file's tokens, with all
/// OOV mass on UNK. Bigram block: frequency of each V2 bigram among the
/// adjacent pairs of the UNK-substituted stream, with everything else on UNK2.
/// Throws DataError("unfeaturizable input") when no tokens remain.
FeatureVector featurize(std::string_view content, const Vocabulary& vocab,
                        const FeaturizeOptions& options = {});

FeatureVector featurize_tokens(const TokenStream& stream, const Vocabulary& vocab);

struct FeaturizedBatch {
  std::vector<FeatureVector> vectors;
  /// Position in the input of each vector.
  std::vector<std::size_t> source_index;
  std::size_t dropped = 0;
};

/// Order-preserving featurize over entries; labels are carried through and
/// unfeaturizable entries are dropped and counted.
FeaturizedBatch featurize_batch(std::span<const CorpusEntry> entries,
                                const Vocabulary& vocab,
                                const FeaturizeOptions& options = {});

/// Sparse text dump: "features <dimension> <count>" header, then one line per
/// vector of space-separated "index:value" pairs (label first as "label=<id>"
/// when present).
std::string dump_features(std::span<const FeatureVector> vectors,
                          std::size_t dimension);

}  // namespace ftdetect
