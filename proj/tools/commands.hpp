#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ftdetect::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitModel = 3,
};

struct BuildCorpusOptions {
  std::filesystem::path root;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> run_manifest;
};

struct TrainOptions {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> run_manifest;
};

struct PredictOptions {
  std::filesystem::path model;
  std::vector<std::filesystem::path> inputs;
  std::size_t top_k = 5;
};

struct EvalOptions {
  std::filesystem::path model;
  std::filesystem::path manifest;
  std::string split = "test";
  std::filesystem::path out;
  bool confusion_groups = false;
  double tau_t = 0.05;
  double tau_s = 0.02;
  bool macro_supported_only = false;
};

struct TokenizeOptions {
  std::filesystem::path input;
  std::size_t trim_head = 0;
  std::size_t trim_tail = 0;
};

// Each command throws ftdetect::Error on failure; run_cli maps the error kind
// to an exit code.
void cmd_build_corpus(const BuildCorpusOptions& options, std::ostream& out);
void cmd_train(const TrainOptions& options, std::ostream& out);
/// Per-file problems are reported inline and do not fail the command.
void cmd_predict(const PredictOptions& options, std::ostream& out);
void cmd_eval(const EvalOptions& options, std::ostream& out);
void cmd_tokenize(const TokenizeOptions& options, std::ostream& out);

/// Parses `args` (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ftdetect::cli
