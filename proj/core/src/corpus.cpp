#include "ftdetect/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <system_error>
#include <tuple>

#include "ftdetect/digest.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/rng.hpp"

namespace fs = std::filesystem;

namespace ftdetect {

LabelMap::LabelMap(std::vector<std::string> extensions)
    : classes_(std::move(extensions)) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    index_.emplace(classes_[i], static_cast<ClassId>(i));
  }
}

const std::string& LabelMap::name(ClassId id) const {
  if (id >= classes_.size()) {
    throw DataError("class id " + std::to_string(id) + " out of range (" +
                    std::to_string(classes_.size()) + " classes)");
  }
  return classes_[id];
}

std::optional<ClassId> LabelMap::find(std::string_view extension) const {
  const auto it = index_.find(extension);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClassId LabelMap::at(std::string_view extension) const {
  if (auto id = find(extension)) return *id;
  throw DataError("unknown extension class '" + std::string(extension) + "'");
}

std::optional<std::string> extension_of(std::string_view filename) {
  const std::size_t dot = filename.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == filename.size()) {
    return std::nullopt;
  }
  std::string ext(filename.substr(dot + 1));
  if (ext.find('/') != std::string::npos || ext.find('\\') != std::string::npos) {
    return std::nullopt;
  }
  for (char& c : ext) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return ext;
}

namespace {

bool read_file(const fs::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return false;
  out = std::move(buffer).str();
  return true;
}

bool entry_order(const CorpusEntry& a, const CorpusEntry& b) {
  return std::tie(a.content_digest, a.extension, a.path) <
         std::tie(b.content_digest, b.extension, b.path);
}

}  // namespace

std::vector<CorpusEntry> ingest(const fs::path& root, IngestStats* stats) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError("corpus root '" + root.string() +
                    "' does not exist or is not a directory");
  }
  fs::recursive_directory_iterator it(
      root, fs::directory_options::skip_permission_denied, ec);
  if (ec) {
    throw DataError("cannot read corpus root '" + root.string() +
                    "': " + ec.message());
  }

  IngestStats local;
  std::vector<CorpusEntry> entries;
  for (const fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) {
      ++local.unreadable;
      ec.clear();
      continue;
    }
    std::error_code status_ec;
    if (!it->is_regular_file(status_ec)) continue;
    ++local.files_seen;

    const fs::path& path = it->path();
    auto ext = extension_of(path.filename().string());
    if (!ext) {
      ++local.skipped_no_extension;
      continue;
    }
    CorpusEntry entry;
    if (!read_file(path, entry.content)) {
      ++local.unreadable;
      continue;
    }
    entry.extension = std::move(*ext);
    entry.path = path.lexically_relative(root).generic_string();
    entry.content_digest = sha256_hex(entry.content);
    entries.push_back(std::move(entry));
  }

  std::sort(entries.begin(), entries.end(), entry_order);
  if (stats) *stats = local;
  return entries;
}

bool is_printable_byte(unsigned char byte) {
  return (byte >= 0x20 && byte <= 0x7E) || byte == '\t' || byte == '\n' ||
         byte == '\r';
}

bool is_textual(std::span<const std::uint8_t> content,
                double max_nonprintable_ratio) {
  if (content.empty()) return false;
  const auto nonprintable = std::count_if(
      content.begin(), content.end(),
      [](std::uint8_t b) { return !is_printable_byte(b); });
  return static_cast<double>(nonprintable) /
             static_cast<double>(content.size()) <=
         max_nonprintable_ratio;
}

bool is_textual(std::string_view content, double max_nonprintable_ratio) {
  return is_textual(
      std::span<const std::uint8_t>(
          reinterpret_cast<const std::uint8_t*>(content.data()), content.size()),
      max_nonprintable_ratio);
}

FrequencyFiltered filter_by_extension_frequency(std::vector<CorpusEntry> entries,
                                                double min_freq) {
  if (!(min_freq >= 0.0 && min_freq <= 1.0)) {
    throw UsageError("min_ext_freq must lie in [0, 1]");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& e : entries) ++counts[e.extension];

  const auto total = static_cast<double>(entries.size());
  std::vector<std::string> kept;
  for (const auto& [ext, count] : counts) {
    if (static_cast<double>(count) / total >= min_freq) kept.push_back(ext);
  }
  if (kept.empty()) throw DataError("empty corpus after frequency filter");

  FrequencyFiltered out;
  out.labels = LabelMap(std::move(kept));
  out.entries.reserve(entries.size());
  for (auto& e : entries) {
    if (auto id = out.labels.find(e.extension)) {
      e.label = *id;
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<CorpusEntry> exclude_multi_extension(std::vector<CorpusEntry> entries) {
  std::sort(entries.begin(), entries.end(), entry_order);
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const CorpusEntry& a, const CorpusEntry& b) {
                              return a.content_digest == b.content_digest &&
                                     a.extension == b.extension;
                            }),
                entries.end());

  // After dedup, a digest still present more than once carries several
  // extensions.
  std::vector<CorpusEntry> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i + 1;
    while (j < entries.size() &&
           entries[j].content_digest == entries[i].content_digest) {
      ++j;
    }
    if (j - i == 1) out.push_back(std::move(entries[i]));
    i = j;
  }
  return out;
}

std::vector<std::size_t> class_counts(std::span<const CorpusEntry> entries,
                                      std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (const auto& e : entries) {
    if (e.label >= num_classes) {
      throw DataError("entry '" + e.path + "' has out-of-range label " +
                      std::to_string(e.label));
    }
    ++counts[e.label];
  }
  return counts;
}

namespace {

std::size_t rounded_share(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

}  // namespace

CorpusSplit split_and_balance(std::vector<CorpusEntry> entries,
                              const LabelMap& labels,
                              const SplitFractions& fractions,
                              double vocab_fraction, std::uint64_t seed) {
  if (!(fractions.train > 0 && fractions.validation > 0 && fractions.test > 0)) {
    throw UsageError("split fractions must all be positive");
  }
  if (std::abs(fractions.train + fractions.validation + fractions.test - 1.0) > 1e-9) {
    throw UsageError("split fractions must sum to 1");
  }
  if (!(vocab_fraction >= 0.0 && vocab_fraction < 1.0)) {
    throw UsageError("vocab_fraction must lie in [0, 1)");
  }

  std::sort(entries.begin(), entries.end(), entry_order);
  std::vector<std::vector<CorpusEntry>> by_class(labels.size());
  std::string previous_digest;
  ClassId previous_label = 0;
  for (auto& e : entries) {
    if (e.label >= labels.size()) {
      throw DataError("entry '" + e.path + "' has out-of-range label");
    }
    if (!previous_digest.empty() && previous_digest == e.content_digest) {
      if (previous_label != e.label) {
        throw DataError("content " + e.content_digest +
                        " is labeled with more than one class");
      }
      continue;
    }
    previous_label = e.label;
    previous_digest = e.content_digest;
    by_class[e.label].push_back(std::move(e));
  }

  for (ClassId c = 0; c < by_class.size(); ++c) {
    if (by_class[c].size() < 4) {
      throw DataError("class '" + labels.name(c) + "' has only " +
                      std::to_string(by_class[c].size()) +
                      " samples (at least 4 required)");
    }
  }

  Rng rng(sub_seed(seed, "split"));
  CorpusSplit split;
  std::size_t balanced = static_cast<std::size_t>(-1);
  for (ClassId c = 0; c < by_class.size(); ++c) {
    auto& pool = by_class[c];
    rng.shuffle(pool);
    const std::size_t n_val = rounded_share(pool.size(), fractions.validation);
    const std::size_t n_test = rounded_share(pool.size(), fractions.test);
    if (n_val + n_test >= pool.size()) {
      throw DataError("class '" + labels.name(c) +
                      "' has no samples left for training after holdout");
    }
    auto first = std::make_move_iterator(pool.begin());
    split.validation.insert(split.validation.end(), first, first + n_val);
    split.test.insert(split.test.end(), first + n_val, first + n_val + n_test);
    pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
    balanced = std::min(balanced, pool.size());
  }

  const std::size_t n_vocab = rounded_share(balanced, vocab_fraction);
  if (n_vocab >= balanced) {
    throw DataError("vocab_fraction leaves no training samples per class");
  }
  for (auto& pool : by_class) {
    auto first = std::make_move_iterator(pool.begin());
    split.vocab_subset.insert(split.vocab_subset.end(), first, first + n_vocab);
    split.train.insert(split.train.end(), first + n_vocab, first + balanced);
  }
  return split;
}

}  // namespace ftdetect
