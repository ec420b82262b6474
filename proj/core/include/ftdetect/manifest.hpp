#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ftdetect/corpus.hpp"

namespace ftdetect {

enum class SplitKind { kTrain, kValidation, kTest, kVocab };

std::string_view split_name(SplitKind kind);
/// Accepts "train", "validation", "test" and "vocab". Throws UsageError.
SplitKind parse_split(std::string_view name);

struct ManifestRecord {
  SplitKind split = SplitKind::kTrain;
  std::string digest;
  std::string extension;
  ClassId label = 0;
  std::string path;
  std::uint64_t size = 0;

  bool operator==(const ManifestRecord&) const = default;
};

/// Corpus manifest: where the files live, the label map, and one record per
/// selected entry. Contents are not stored; they are re-read from `root` and
/// checked against the recorded digest.
struct CorpusManifest {
  std::string root;
  LabelMap labels;
  std::vector<ManifestRecord> records;

  std::vector<ManifestRecord> records_in(SplitKind kind) const;
  bool operator==(const CorpusManifest&) const = default;
};

CorpusManifest make_manifest(const CorpusSplit& split, const LabelMap& labels,
                             std::string root);

/// Line format:
///
///   ftdetect-corpus<TAB>1
///   root<TAB><escaped path>
///   classes<TAB><n>            followed by n escaped extensions
///   entries<TAB><m>            followed by m records:
///   <split><TAB><digest><TAB><extension><TAB><label><TAB><path><TAB><size>
std::string serialize_manifest(const CorpusManifest& manifest);
CorpusManifest parse_manifest(std::string_view text);

/// Reads the files of one split back from disk. Throws DataError when a file
/// is missing or its digest no longer matches.
std::vector<CorpusEntry> load_entries(const CorpusManifest& manifest, SplitKind kind);

}  // namespace ftdetect
