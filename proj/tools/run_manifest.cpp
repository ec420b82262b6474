#include "run_manifest.hpp"

#include <chrono>
#include <ctime>

#include "ftdetect/error.hpp"
#include "ftdetect/io.hpp"
#include "json.hpp"

namespace ftdetect::cli {

using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string to_json(const RunManifest& m) {
  json j;
  j["format"] = "ftdetect-run";
  j["version"] = 1;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["corpus_digest"] = m.corpus_digest;
  j["vocabulary_digest"] = m.vocabulary_digest;
  j["model_digest"] = m.model_digest;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["counters"] = m.counters;
  return j.dump(2) + "\n";
}

RunManifest run_manifest_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "ftdetect-run" || j.at("version") != 1) {
      throw DataError("not an ftdetect run manifest");
    }
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.corpus_digest = j.at("corpus_digest").get<std::string>();
    m.vocabulary_digest = j.at("vocabulary_digest").get<std::string>();
    m.model_digest = j.at("model_digest").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.counters = j.at("counters").get<std::map<std::string, std::uint64_t>>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("run manifest: ") + e.what());
  }
}

void write_run_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_file(path, to_json(manifest));
}

}  // namespace ftdetect::cli
