#include "ftdetect/features.hpp"

#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"

namespace ftdetect {

FeatureVector featurize_tokens(const TokenStream& stream, const Vocabulary& vocab) {
  const auto& tokens = stream.tokens;
  if (tokens.empty()) throw DataError("unfeaturizable input");

  std::vector<std::uint64_t> counts(vocab.dimension(), 0);
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) {
    const std::size_t id = vocab.token_id(token);
    ids.push_back(id);
    ++counts[id];
  }
  for (std::size_t i = 1; i < ids.size(); ++i) {
    ++counts[vocab.bigram_index(ids[i - 1], ids[i])];
  }

  FeatureVector vector;
  vector.values.assign(vocab.dimension(), 0.0);
  const auto n_tokens = static_cast<double>(tokens.size());
  for (std::size_t i = 0; i < vocab.bigram_offset(); ++i) {
    if (counts[i]) vector.values[i] = static_cast<double>(counts[i]) / n_tokens;
  }
  if (tokens.size() > 1) {
    const auto n_bigrams = static_cast<double>(tokens.size() - 1);
    for (std::size_t i = vocab.bigram_offset(); i < vocab.dimension(); ++i) {
      if (counts[i]) vector.values[i] = static_cast<double>(counts[i]) / n_bigrams;
    }
  }
  return vector;
}

FeatureVector featurize(std::string_view content, const Vocabulary& vocab,
                        const FeaturizeOptions& options) {
  TokenStream stream = tokenize(decode(content));
  if (options.trim) {
    stream = trim_affixes(std::move(stream), options.trim->head, options.trim->tail);
  }
  return featurize_tokens(stream, vocab);
}

FeaturizedBatch featurize_batch(std::span<const CorpusEntry> entries,
                                const Vocabulary& vocab,
                                const FeaturizeOptions& options) {
  FeaturizedBatch batch;
  batch.vectors.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      FeatureVector v = featurize(entries[i].content, vocab, options);
      v.label = entries[i].label;
      batch.vectors.push_back(std::move(v));
      batch.source_index.push_back(i);
    } catch (const DataError&) {
      ++batch.dropped;
    }
  }
  return batch;
}

std::string dump_features(std::span<const FeatureVector> vectors,
                          std::size_t dimension) {
  std::string out = "features " + std::to_string(dimension) + " " +
                    std::to_string(vectors.size()) + "\n";
  for (const auto& v : vectors) {
    bool first = true;
    if (v.label) {
      out += "label=" + std::to_string(*v.label);
      first = false;
    }
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (v.values[i] == 0.0) continue;
      if (!first) out.push_back(' ');
      out += std::to_string(i) + ":" + format_real(v.values[i]);
      first = false;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace ftdetect
