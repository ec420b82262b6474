#include "ftdetect/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"

namespace ftdetect {

std::uint64_t ConfusionMatrix::count(ClassId truth, ClassId predicted) const {
  return counts_[truth * size_ + predicted];
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < size_; ++i) sum += counts_[i * size_ + i];
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(ClassId truth) const {
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < size_; ++j) sum += counts_[truth * size_ + j];
  return sum;
}

std::uint64_t ConfusionMatrix::column_sum(ClassId predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < size_; ++i) sum += counts_[i * size_ + predicted];
  return sum;
}

void ConfusionMatrix::accumulate(ClassId truth, ClassId predicted) {
  if (truth >= size_ || predicted >= size_) {
    throw DataError("class id out of range for a " + std::to_string(size_) +
                    "-class confusion matrix");
  }
  ++counts_[truth * size_ + predicted];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.size_ != size_) throw DataError("confusion matrix sizes differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

void ConfusionMatrix::set(ClassId truth, ClassId predicted, std::uint64_t value) {
  if (truth >= size_ || predicted >= size_) throw DataError("class id out of range");
  counts_[truth * size_ + predicted] = value;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Equal inputs return that value exactly; 2pp/(p+p) can be off by an ulp.
double harmonic(double p, double r) {
  if (p == r) return p;
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace

EvaluationReport report(const ConfusionMatrix& matrix, const ReportOptions& options) {
  const std::uint64_t total = matrix.total();
  if (total == 0) throw DataError("cannot report on an empty confusion matrix");

  EvaluationReport out;
  std::uint64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  std::size_t macro_classes = 0;
  for (ClassId i = 0; i < matrix.size(); ++i) {
    const std::uint64_t tp = matrix.count(i, i);
    const std::uint64_t predicted = matrix.column_sum(i);
    const std::uint64_t support = matrix.row_sum(i);
    ClassScores s;
    s.id = i;
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, support);
    s.f1 = harmonic(s.precision, s.recall);
    s.support = support;
    out.per_class.push_back(s);

    tp_sum += tp;
    fp_sum += predicted - tp;
    fn_sum += support - tp;
    if (!options.macro_supported_only || support > 0) {
      out.macro.precision += s.precision;
      out.macro.recall += s.recall;
      out.macro.f1 += s.f1;
      ++macro_classes;
    }
  }
  if (macro_classes > 0) {
    const auto n = static_cast<double>(macro_classes);
    out.macro.precision /= n;
    out.macro.recall /= n;
    out.macro.f1 /= n;
  }
  out.micro.precision = ratio(tp_sum, tp_sum + fp_sum);
  out.micro.recall = ratio(tp_sum, tp_sum + fn_sum);
  out.micro.f1 = harmonic(out.micro.precision, out.micro.recall);
  out.accuracy = ratio(matrix.trace(), total);
  return out;
}

std::vector<ClassId> order_by_support(const EvaluationReport& report) {
  std::vector<ClassId> ids;
  for (const auto& s : report.per_class) ids.push_back(s.id);
  std::stable_sort(ids.begin(), ids.end(), [&](ClassId a, ClassId b) {
    return report.per_class[a].support > report.per_class[b].support;
  });
  return ids;
}

std::string format_report_table(const EvaluationReport& report, const LabelMap& labels) {
  std::size_t width = 9;
  for (const auto& name : labels.classes()) width = std::max(width, name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %9s %9s %9s %9s\n", static_cast<int>(width),
                "extension", "precision", "recall", "f1", "support");
  out += line;
  for (const ClassId id : order_by_support(report)) {
    const auto& s = report.per_class[id];
    std::snprintf(line, sizeof line, "%-*s %9.4f %9.4f %9.4f %9llu\n",
                  static_cast<int>(width), labels.name(id).c_str(), s.precision,
                  s.recall, s.f1, static_cast<unsigned long long>(s.support));
    out += line;
  }
  const auto average_row = [&](const char* name, const AverageScores& a) {
    std::snprintf(line, sizeof line, "%-*s %9.4f %9.4f %9.4f\n", static_cast<int>(width),
                  name, a.precision, a.recall, a.f1);
    out += line;
  };
  out += "\n";
  average_row("micro", report.micro);
  average_row("macro", report.macro);
  std::snprintf(line, sizeof line, "%-*s %9.4f\n", static_cast<int>(width), "accuracy",
                report.accuracy);
  out += line;
  return out;
}

std::string format_report_tsv(const EvaluationReport& report, const LabelMap& labels) {
  std::string out = "class_id\textension\tprecision\trecall\tf1\tsupport\n";
  for (const auto& s : report.per_class) {
    out += std::to_string(s.id) + "\t" + escape_field(labels.name(s.id)) + "\t" +
           format_real(s.precision) + "\t" + format_real(s.recall) + "\t" +
           format_real(s.f1) + "\t" + std::to_string(s.support) + "\n";
  }
  out += "micro\t\t" + format_real(report.micro.precision) + "\t" +
         format_real(report.micro.recall) + "\t" + format_real(report.micro.f1) + "\t\n";
  out += "macro\t\t" + format_real(report.macro.precision) + "\t" +
         format_real(report.macro.recall) + "\t" + format_real(report.macro.f1) + "\t\n";
  out += "accuracy\t\t" + format_real(report.accuracy) + "\t\t\t\n";
  return out;
}

std::string format_confusion_matrix(const ConfusionMatrix& matrix, const LabelMap& labels) {
  std::string out = "truth\\predicted";
  for (ClassId j = 0; j < matrix.size(); ++j) out += "\t" + escape_field(labels.name(j));
  out += "\n";
  for (ClassId i = 0; i < matrix.size(); ++i) {
    out += escape_field(labels.name(i));
    for (ClassId j = 0; j < matrix.size(); ++j) out += "\t" + std::to_string(matrix.count(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace ftdetect
