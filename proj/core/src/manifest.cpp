#include "ftdetect/manifest.hpp"

#include <filesystem>

#include "ftdetect/digest.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"
#include "ftdetect/io.hpp"

namespace ftdetect {

namespace {

constexpr std::string_view kManifestMagic = "ftdetect-corpus";
constexpr std::uint64_t kManifestVersion = 1;

std::string_view expect_key(LineReader& reader, std::string_view key) {
  const auto fields = split_tabs(reader.next());
  if (fields.size() != 2 || fields[0] != key) {
    throw DataError("corpus manifest: expected '" + std::string(key) + "' on line " +
                    std::to_string(reader.line_number()));
  }
  return fields[1];
}

void append_records(std::vector<ManifestRecord>& out, SplitKind kind,
                    const std::vector<CorpusEntry>& entries) {
  for (const auto& e : entries) {
    out.push_back({kind, e.content_digest, e.extension, e.label, e.path,
                   static_cast<std::uint64_t>(e.content.size())});
  }
}

}  // namespace

std::string_view split_name(SplitKind kind) {
  switch (kind) {
    case SplitKind::kTrain: return "train";
    case SplitKind::kValidation: return "validation";
    case SplitKind::kTest: return "test";
    case SplitKind::kVocab: return "vocab";
  }
  return "train";
}

SplitKind parse_split(std::string_view name) {
  if (name == "train") return SplitKind::kTrain;
  if (name == "validation") return SplitKind::kValidation;
  if (name == "test") return SplitKind::kTest;
  if (name == "vocab") return SplitKind::kVocab;
  throw UsageError("unknown split '" + std::string(name) + "'");
}

std::vector<ManifestRecord> CorpusManifest::records_in(SplitKind kind) const {
  std::vector<ManifestRecord> out;
  for (const auto& r : records) {
    if (r.split == kind) out.push_back(r);
  }
  return out;
}

CorpusManifest make_manifest(const CorpusSplit& split, const LabelMap& labels,
                             std::string root) {
  CorpusManifest manifest;
  manifest.root = std::move(root);
  manifest.labels = labels;
  append_records(manifest.records, SplitKind::kTrain, split.train);
  append_records(manifest.records, SplitKind::kValidation, split.validation);
  append_records(manifest.records, SplitKind::kTest, split.test);
  append_records(manifest.records, SplitKind::kVocab, split.vocab_subset);
  return manifest;
}

std::string serialize_manifest(const CorpusManifest& manifest) {
  std::string out;
  out += std::string(kManifestMagic) + "\t" + std::to_string(kManifestVersion) + "\n";
  out += "root\t" + escape_field(manifest.root) + "\n";
  out += "classes\t" + std::to_string(manifest.labels.size()) + "\n";
  for (const auto& ext : manifest.labels.classes()) out += escape_field(ext) + "\n";
  out += "entries\t" + std::to_string(manifest.records.size()) + "\n";
  for (const auto& r : manifest.records) {
    out += std::string(split_name(r.split)) + "\t" + r.digest + "\t" +
           escape_field(r.extension) + "\t" + std::to_string(r.label) + "\t" +
           escape_field(r.path) + "\t" + std::to_string(r.size) + "\n";
  }
  return out;
}

CorpusManifest parse_manifest(std::string_view text) {
  LineReader reader(text);
  const auto version = parse_count(expect_key(reader, kManifestMagic));
  if (version != kManifestVersion) {
    throw DataError("unsupported corpus manifest version " + std::to_string(version));
  }
  CorpusManifest manifest;
  manifest.root = unescape_field(expect_key(reader, "root"));

  const auto n_classes = parse_count(expect_key(reader, "classes"));
  std::vector<std::string> classes;
  for (std::uint64_t i = 0; i < n_classes; ++i) {
    classes.push_back(unescape_field(reader.next()));
  }
  manifest.labels = LabelMap(classes);
  if (manifest.labels.classes() != classes) {
    throw DataError("corpus manifest classes are not sorted and unique");
  }

  const auto n_entries = parse_count(expect_key(reader, "entries"));
  manifest.records.reserve(n_entries);
  for (std::uint64_t i = 0; i < n_entries; ++i) {
    const auto fields = split_tabs(reader.next());
    if (fields.size() != 6) {
      throw DataError("corpus manifest: malformed record on line " +
                      std::to_string(reader.line_number()));
    }
    ManifestRecord r;
    r.split = parse_split(fields[0]);
    r.digest = std::string(fields[1]);
    r.extension = unescape_field(fields[2]);
    const auto label = parse_count(fields[3]);
    if (label >= manifest.labels.size() ||
        manifest.labels.name(static_cast<ClassId>(label)) != r.extension) {
      throw DataError("corpus manifest: label does not match extension on line " +
                      std::to_string(reader.line_number()));
    }
    r.label = static_cast<ClassId>(label);
    r.path = unescape_field(fields[4]);
    r.size = parse_count(fields[5]);
    manifest.records.push_back(std::move(r));
  }
  if (!reader.done()) throw DataError("corpus manifest: trailing data");
  return manifest;
}

std::vector<CorpusEntry> load_entries(const CorpusManifest& manifest, SplitKind kind) {
  const std::filesystem::path root(manifest.root);
  std::vector<CorpusEntry> entries;
  for (const auto& r : manifest.records) {
    if (r.split != kind) continue;
    CorpusEntry e;
    e.content = read_file(root / r.path);
    e.content_digest = sha256_hex(e.content);
    if (e.content_digest != r.digest || e.content.size() != r.size) {
      throw DataError("'" + r.path + "' changed since the manifest was written");
    }
    e.label = r.label;
    e.extension = r.extension;
    e.path = r.path;
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace ftdetect
