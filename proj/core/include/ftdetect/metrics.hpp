#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftdetect/corpus.hpp"

namespace ftdetect {

/// counts(i, j) = number of files of true class i predicted as class j.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes = 0)
      : size_(num_classes), counts_(num_classes * num_classes, 0) {}

  std::size_t size() const { return size_; }
  std::uint64_t count(ClassId truth, ClassId predicted) const;
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(ClassId truth) const;
  std::uint64_t column_sum(ClassId predicted) const;

  /// Throws DataError for ids outside [0, size()).
  void accumulate(ClassId truth, ClassId predicted);
  /// Adds another matrix of the same size (sharded accumulation).
  void merge(const ConfusionMatrix& other);
  void set(ClassId truth, ClassId predicted, std::uint64_t value);

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t size_;
  std::vector<std::uint64_t> counts_;
};

struct ClassScores {
  ClassId id = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct AverageScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvaluationReport {
  std::vector<ClassScores> per_class;
  AverageScores micro;
  AverageScores macro;
  double accuracy = 0.0;
};

struct ReportOptions {
  /// Restrict the macro average to classes with test support.
  bool macro_supported_only = false;
};

/// Per-class precision, recall and F1 (0 when a denominator is 0), micro
/// averages from pooled TP/FP/FN and unweighted macro averages. Throws
/// DataError for an all-zero matrix.
EvaluationReport report(const ConfusionMatrix& matrix, const ReportOptions& options = {});

/// Class ids by descending support, ties by id.
std::vector<ClassId> order_by_support(const EvaluationReport& report);

/// Aligned table, rows by descending support, then the averages.
std::string format_report_table(const EvaluationReport& report, const LabelMap& labels);

/// Tab-separated dump: header, one row per class id, then micro/macro/accuracy.
std::string format_report_tsv(const EvaluationReport& report, const LabelMap& labels);

/// Dense integer grid with class names as header row and first column.
std::string format_confusion_matrix(const ConfusionMatrix& matrix, const LabelMap& labels);

}  // namespace ftdetect
