#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace ftdetect::cli {

/// Provenance record written next to every artifact a command produces.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string corpus_digest;
  std::string vocabulary_digest;
  std::string model_digest;
  std::string started_at;
  std::string finished_at;
  std::map<std::string, std::uint64_t> counters;

  bool operator==(const RunManifest&) const = default;
};

std::string utc_timestamp();

std::string to_json(const RunManifest& manifest);
RunManifest run_manifest_from_json(const std::string& text);

void write_run_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace ftdetect::cli
