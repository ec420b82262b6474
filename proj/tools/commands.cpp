#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "CLI11.hpp"
#include "ftdetect/config.hpp"
#include "ftdetect/confusion.hpp"
#include "ftdetect/corpus.hpp"
#include "ftdetect/digest.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"
#include "ftdetect/features.hpp"
#include "ftdetect/io.hpp"
#include "ftdetect/manifest.hpp"
#include "ftdetect/metrics.hpp"
#include "ftdetect/model_io.hpp"
#include "ftdetect/network.hpp"
#include "ftdetect/tokenizer.hpp"
#include "ftdetect/vocabulary.hpp"
#include "run_manifest.hpp"

namespace fs = std::filesystem;

namespace ftdetect::cli {

namespace {

std::string fixed(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::map<std::string, std::string> config_snapshot(const std::string& formatted) {
  const auto kv = KeyValueConfig::parse(formatted);
  return {kv.values().begin(), kv.values().end()};
}

fs::path run_manifest_path(const std::optional<fs::path>& explicit_path, const fs::path& out) {
  if (explicit_path) return *explicit_path;
  fs::path p = out;
  p += ".run.json";
  return p;
}

CorpusManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_file(path));
}

std::string root_string(const fs::path& root) {
  std::string s = fs::absolute(root).lexically_normal().generic_string();
  while (s.size() > 1 && s.back() == '/') s.pop_back();
  return s;
}

void write_with_suffix(const fs::path& prefix, const char* suffix, const std::string& text) {
  fs::path p = prefix;
  p += suffix;
  write_file(p, text);
}

}  // namespace

void cmd_build_corpus(const BuildCorpusOptions& options, std::ostream& out) {
  RunManifest run;
  run.command = "build-corpus";
  run.started_at = utc_timestamp();
  const CorpusConfig config =
      options.config ? corpus_config_from(KeyValueConfig::load(*options.config)) : CorpusConfig{};
  run.config = config_snapshot(format_corpus_config(config));
  run.seed = config.seed;

  IngestStats stats;
  std::vector<CorpusEntry> entries = ingest(options.root, &stats);
  run.counters["files_seen"] = stats.files_seen;
  run.counters["skipped_no_extension"] = stats.skipped_no_extension;
  run.counters["unreadable"] = stats.unreadable;
  run.counters["files_ingested"] = entries.size();

  const std::size_t before_binary = entries.size();
  std::erase_if(entries, [&](const CorpusEntry& e) {
    return !is_textual(e.content, config.max_nonprintable_ratio);
  });
  run.counters["dropped_binary"] = before_binary - entries.size();
  if (entries.empty()) throw DataError("empty corpus: no textual files with an extension");

  const std::size_t before_rare = entries.size();
  auto frequent = filter_by_extension_frequency(std::move(entries), config.min_ext_freq);
  run.counters["dropped_rare_extension"] = before_rare - frequent.entries.size();

  const std::size_t before_multi = frequent.entries.size();
  auto single = exclude_multi_extension(std::move(frequent.entries));
  run.counters["dropped_multi_extension"] = before_multi - single.size();
  if (single.empty()) throw DataError("empty corpus after multi-extension exclusion");

  auto relabeled = filter_by_extension_frequency(std::move(single), 0.0);
  const CorpusSplit split =
      split_and_balance(std::move(relabeled.entries), relabeled.labels, config.fractions,
                        config.vocab_fraction, config.seed);

  const CorpusManifest manifest =
      make_manifest(split, relabeled.labels, root_string(options.root));
  const std::string text = serialize_manifest(manifest);
  write_file(options.out, text);
  run.corpus_digest = sha256_hex(text);
  run.counters["train"] = split.train.size();
  run.counters["validation"] = split.validation.size();
  run.counters["test"] = split.test.size();
  run.counters["vocab_subset"] = split.vocab_subset.size();
  run.finished_at = utc_timestamp();
  write_run_manifest(run_manifest_path(options.run_manifest, options.out), run);

  out << "files seen              " << stats.files_seen << "\n"
      << "skipped (no extension)  " << stats.skipped_no_extension << "\n"
      << "unreadable              " << stats.unreadable << "\n"
      << "dropped binary          " << run.counters["dropped_binary"] << "\n"
      << "dropped rare extension  " << run.counters["dropped_rare_extension"] << "\n"
      << "dropped multi-extension " << run.counters["dropped_multi_extension"] << "\n"
      << "classes                 " << relabeled.labels.size() << "\n"
      << "train " << split.train.size() << "  validation " << split.validation.size()
      << "  test " << split.test.size() << "  vocab " << split.vocab_subset.size() << "\n"
      << "wrote " << options.out.string() << "\n";
}

void cmd_train(const TrainOptions& options, std::ostream& out) {
  RunManifest run;
  run.command = "train";
  run.started_at = utc_timestamp();
  const TrainingOptions training = options.config
                                       ? training_options_from(KeyValueConfig::load(*options.config))
                                       : TrainingOptions{};
  run.config = config_snapshot(format_training_options(training));
  run.seed = training.train.seed;

  const std::string manifest_text = read_file(options.manifest);
  const CorpusManifest manifest = parse_manifest(manifest_text);
  run.corpus_digest = sha256_hex(manifest_text);
  const std::size_t num_classes = manifest.labels.size();

  const auto vocab_entries = load_entries(manifest, SplitKind::kVocab);
  const Vocabulary vocab = build_vocabulary(vocab_entries, num_classes, training.vocabulary);
  out << "vocabulary " << vocab.tokens().size() << " tokens, " << vocab.bigrams().size()
      << " bigrams, dimension " << vocab.dimension() << "\n";

  FeaturizeOptions train_features;
  if (training.trim_training_features) train_features.trim = training.vocabulary.trim;
  const auto train_batch =
      featurize_batch(load_entries(manifest, SplitKind::kTrain), vocab, train_features);
  const auto validation_batch =
      featurize_batch(load_entries(manifest, SplitKind::kValidation), vocab);
  run.counters["train_samples"] = train_batch.vectors.size();
  run.counters["validation_samples"] = validation_batch.vectors.size();
  run.counters["dropped_unfeaturizable"] = train_batch.dropped + validation_batch.dropped;

  const Architecture arch = training.architecture(vocab.dimension(), num_classes);
  TrainResult result = train(train_batch.vectors, validation_batch.vectors, arch, training.train,
                             [&](const EpochMetrics& m) {
                               out << "epoch " << m.epoch << " train_loss "
                                   << fixed(m.train_loss, 6) << " validation_accuracy "
                                   << fixed(m.validation_accuracy) << "\n";
                             });

  ModelArtifact model;
  model.params = std::move(result.params);
  model.params.vocab_digest = vocabulary_digest(vocab);
  model.params.labels = manifest.labels;
  model.train_config = training.train;
  model.vocabulary = vocab;
  const std::string bytes = serialize_model(model);
  try {
    write_file(options.out, bytes);
  } catch (const DataError& e) {
    throw ModelError(e.what());
  }
  run.vocabulary_digest = model.params.vocab_digest;
  run.model_digest = sha256_hex(bytes);
  run.finished_at = utc_timestamp();
  write_run_manifest(run_manifest_path(options.run_manifest, options.out), run);

  out << "final validation accuracy " << fixed(result.log.back().validation_accuracy) << "\n"
      << "wrote " << options.out.string() << "\n";
}

void cmd_predict(const PredictOptions& options, std::ostream& out) {
  if (options.top_k == 0) throw UsageError("--top-k must be at least 1");
  const ModelArtifact model = load_model(options.model);
  check_vocabulary(model.params, model.vocabulary);
  const auto& labels = model.params.labels;

  for (const auto& input : options.inputs) {
    out << escape_field(input.string()) << "\t";
    std::string content;
    try {
      content = read_file(input);
    } catch (const DataError&) {
      out << "error\tunreadable\n";
      continue;
    }
    Prediction p;
    try {
      p = predict_unchecked(model.params, content, model.vocabulary, options.top_k);
    } catch (const DataError&) {
      out << "error\tunfeaturizable\n";
      continue;
    }
    out << escape_field(labels.name(p.predicted)) << "\t"
        << fixed(p.probabilities[p.predicted], 6) << "\t";
    for (std::size_t i = 0; i < p.top.size(); ++i) {
      if (i) out << ",";
      out << escape_field(labels.name(p.top[i].first)) << ":" << fixed(p.top[i].second, 6);
    }
    out << "\n";
  }
}

void cmd_eval(const EvalOptions& options, std::ostream& out) {
  const ModelArtifact model = load_model(options.model);
  check_vocabulary(model.params, model.vocabulary);
  const CorpusManifest manifest = load_manifest(options.manifest);
  if (!(model.params.labels == manifest.labels)) {
    throw DataError("model classes differ from the corpus classes");
  }
  const auto& labels = manifest.labels;
  const SplitKind kind = parse_split(options.split);
  const auto entries = load_entries(manifest, kind);
  if (entries.empty()) {
    throw DataError("split '" + options.split + "' has no entries");
  }

  ConfusionMatrix matrix(labels.size());
  std::size_t unfeaturizable = 0;
  for (const auto& e : entries) {
    try {
      const Prediction p = predict_unchecked(model.params, e.content, model.vocabulary, 1);
      matrix.accumulate(e.label, p.predicted);
    } catch (const DataError&) {
      ++unfeaturizable;
    }
  }
  if (matrix.total() == 0) throw DataError("no featurizable files in split '" + options.split + "'");

  ReportOptions report_options;
  report_options.macro_supported_only = options.macro_supported_only;
  const EvaluationReport rep = report(matrix, report_options);
  write_with_suffix(options.out, ".report.txt", format_report_table(rep, labels));
  write_with_suffix(options.out, ".report.tsv", format_report_tsv(rep, labels));
  write_with_suffix(options.out, ".confusion.tsv", format_confusion_matrix(matrix, labels));

  out << "split " << options.split << ": " << matrix.total() << " files evaluated";
  if (unfeaturizable) out << ", " << unfeaturizable << " unfeaturizable skipped";
  out << "\n"
      << "accuracy " << fixed(rep.accuracy) << "\n"
      << "micro    precision " << fixed(rep.micro.precision) << " recall "
      << fixed(rep.micro.recall) << " f1 " << fixed(rep.micro.f1) << "\n"
      << "macro    precision " << fixed(rep.macro.precision) << " recall "
      << fixed(rep.macro.recall) << " f1 " << fixed(rep.macro.f1) << "\n";

  if (!options.confusion_groups) return;

  const auto validation = load_entries(manifest, SplitKind::kValidation);
  std::vector<TruthPrediction> pairs;
  std::vector<TopRecord> records;
  for (const auto& e : validation) {
    try {
      const FeatureVector x = featurize(e.content, model.vocabulary);
      const Prediction p = predict_features(model.params, x.values, 1);
      pairs.emplace_back(e.label, p.predicted);
      records.push_back({p.predicted, top_k(p.probabilities, 5)});
    } catch (const DataError&) {
    }
  }
  if (pairs.empty()) throw DataError("validation split has no featurizable files");
  ConfusionStats stats;
  stats.T = compute_T(pairs, labels.size());
  stats.S = compute_S(records, labels.size());
  stats.tau_T = options.tau_t;
  stats.tau_S = options.tau_s;
  const ConfusionGroups groups = build_groups(stats);
  const std::string table = format_groups(groups, labels);
  write_with_suffix(options.out, ".groups.tsv", table);
  write_with_suffix(options.out, ".T.tsv", format_square_matrix(stats.T, labels));
  write_with_suffix(options.out, ".S.tsv", format_square_matrix(stats.S, labels));
  out << "confusion groups (validation, tau_T " << format_real(stats.tau_T) << ", tau_S "
      << format_real(stats.tau_S) << ")\n"
      << table;
}

void cmd_tokenize(const TokenizeOptions& options, std::ostream& out) {
  const std::string content = read_file(options.input);
  const TokenStream stream =
      trim_affixes(tokenize_content(content), options.trim_head, options.trim_tail);
  for (const auto& token : stream.tokens) out << escape_field(token) << "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content-based file-type detection"};
  app.name("ftdetect");
  app.require_subcommand(1);

  BuildCorpusOptions build;
  std::string build_config, build_run;
  auto* build_cmd = app.add_subcommand("build-corpus", "Filter, balance and split a file tree");
  build_cmd->add_option("root", build.root, "Corpus directory")->required();
  build_cmd->add_option("-c,--config", build_config, "Corpus config (key = value)");
  build_cmd->add_option("-o,--out", build.out, "Corpus manifest to write")->required();
  build_cmd->add_option("--run-manifest", build_run, "Run manifest path (default <out>.run.json)");

  TrainOptions train_opts;
  std::string train_config, train_run;
  auto* train_cmd = app.add_subcommand("train", "Build vocabularies and train the classifier");
  train_cmd->add_option("manifest", train_opts.manifest, "Corpus manifest")->required();
  train_cmd->add_option("-c,--config", train_config, "Training config (key = value)");
  train_cmd->add_option("-o,--out", train_opts.out, "Model artifact to write")->required();
  train_cmd->add_option("--run-manifest", train_run, "Run manifest path (default <out>.run.json)");

  PredictOptions predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "Classify files by content");
  predict_cmd->add_option("model", predict_opts.model, "Model artifact")->required();
  predict_cmd->add_option("inputs", predict_opts.inputs, "Files to classify")->required();
  predict_cmd->add_option("-k,--top-k", predict_opts.top_k, "Number of ranked classes to print");

  EvalOptions eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a corpus split");
  eval_cmd->add_option("model", eval_opts.model, "Model artifact")->required();
  eval_cmd->add_option("manifest", eval_opts.manifest, "Corpus manifest")->required();
  eval_cmd->add_option("-s,--split", eval_opts.split, "train, validation, test or vocab");
  eval_cmd->add_option("-o,--out", eval_opts.out, "Output prefix for report files")->required();
  eval_cmd->add_flag("--confusion-groups", eval_opts.confusion_groups,
                     "Also compute confusion groups on the validation split");
  eval_cmd->add_option("--tau-t", eval_opts.tau_t, "Threshold on T");
  eval_cmd->add_option("--tau-s", eval_opts.tau_s, "Threshold on S");
  eval_cmd->add_flag("--macro-supported-only", eval_opts.macro_supported_only,
                     "Macro average over classes with support only");

  TokenizeOptions tokenize_opts;
  auto* tokenize_cmd = app.add_subcommand("tokenize", "Print the tokens of a file, one per line");
  tokenize_cmd->add_option("input", tokenize_opts.input, "File to tokenize")->required();
  tokenize_cmd->add_option("--trim-head", tokenize_opts.trim_head, "Tokens to drop at the start");
  tokenize_cmd->add_option("--trim-tail", tokenize_opts.trim_tail, "Tokens to drop at the end");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build_cmd) {
      if (!build_config.empty()) build.config = build_config;
      if (!build_run.empty()) build.run_manifest = build_run;
      cmd_build_corpus(build, out);
    } else if (*train_cmd) {
      if (!train_config.empty()) train_opts.config = train_config;
      if (!train_run.empty()) train_opts.run_manifest = train_run;
      cmd_train(train_opts, out);
    } else if (*predict_cmd) {
      cmd_predict(predict_opts, out);
    } else if (*eval_cmd) {
      cmd_eval(eval_opts, out);
    } else if (*tokenize_cmd) {
      cmd_tokenize(tokenize_opts, out);
    }
  } catch (const Error& e) {
    err << "ftdetect: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "ftdetect: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ftdetect::cli
