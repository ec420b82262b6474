#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftdetect {

using ClassId = std::uint32_t;

/// One labeled sample. `label` indexes the corpus LabelMap; it is only
/// meaningful once a LabelMap has been built over the entry set.
struct CorpusEntry {
  std::string content;
  ClassId label = 0;
  std::string extension;
  std::string path;
  std::string content_digest;

  bool operator==(const CorpusEntry&) const = default;
};

/// Ordered, lexicographically sorted extension classes. Position in the list
/// is the class id.
class LabelMap {
 public:
  LabelMap() = default;
  /// Sorts and deduplicates `extensions`.
  explicit LabelMap(std::vector<std::string> extensions);

  std::size_t size() const { return classes_.size(); }
  bool empty() const { return classes_.empty(); }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::string& name(ClassId id) const;
  std::optional<ClassId> find(std::string_view extension) const;
  /// Like find, but throws DataError for unknown extensions.
  ClassId at(std::string_view extension) const;

  bool operator==(const LabelMap& other) const {
    return classes_ == other.classes_;
  }

 private:
  std::vector<std::string> classes_;
  std::map<std::string, ClassId, std::less<>> index_;
};

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;

  bool operator==(const SplitFractions&) const = default;
};

struct CorpusConfig {
  double min_ext_freq = 1e-4;
  double max_nonprintable_ratio = 0.20;
  SplitFractions fractions;
  double vocab_fraction = 0.2;
  std::uint64_t seed = 0;

  bool operator==(const CorpusConfig&) const = default;
};

struct CorpusSplit {
  std::vector<CorpusEntry> train;
  std::vector<CorpusEntry> validation;
  std::vector<CorpusEntry> test;
  std::vector<CorpusEntry> vocab_subset;
};

struct IngestStats {
  std::size_t files_seen = 0;
  std::size_t skipped_no_extension = 0;
  std::size_t unreadable = 0;
};

/// Extension class of a filename: the text after the last dot, lowercased.
/// Returns nullopt for names without a dot, with a trailing dot, or whose
/// only dot is the leading one (".gitignore").
std::optional<std::string> extension_of(std::string_view filename);

/// Walks `root` recursively and loads every regular file that carries an
/// extension. Entries come back sorted by (digest, extension, path) so later
/// stages see the same order no matter how the directory was enumerated.
/// Paths are stored relative to `root` with forward slashes. Labels are left
/// at 0; see filter_by_extension_frequency.
std::vector<CorpusEntry> ingest(const std::filesystem::path& root,
                                IngestStats* stats = nullptr);

bool is_printable_byte(unsigned char byte);

/// True iff the share of non-printable bytes is at most
/// `max_nonprintable_ratio`. Empty content is never textual.
bool is_textual(std::span<const std::uint8_t> content,
                double max_nonprintable_ratio = 0.20);
bool is_textual(std::string_view content,
                double max_nonprintable_ratio = 0.20);

struct FrequencyFiltered {
  std::vector<CorpusEntry> entries;
  LabelMap labels;
};

/// Drops every extension whose share of the corpus is below `min_freq`, then
/// assigns labels from a LabelMap over the survivors.
FrequencyFiltered filter_by_extension_frequency(std::vector<CorpusEntry> entries,
                                                double min_freq = 1e-4);

/// Collapses exact (digest, extension) duplicates to one entry and removes
/// every digest that occurs under two or more extensions.
std::vector<CorpusEntry> exclude_multi_extension(std::vector<CorpusEntry> entries);

/// Stratified holdout of validation and test, then undersampling of the rest
/// to the smallest class, then a per-class vocabulary carve-out.
CorpusSplit split_and_balance(std::vector<CorpusEntry> entries,
                              const LabelMap& labels,
                              const SplitFractions& fractions,
                              double vocab_fraction, std::uint64_t seed);

/// Per-class sample counts, indexed by class id.
std::vector<std::size_t> class_counts(std::span<const CorpusEntry> entries,
                                      std::size_t num_classes);

}  // namespace ftdetect
