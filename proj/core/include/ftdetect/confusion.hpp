#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ftdetect/corpus.hpp"

namespace ftdetect {

/// Square real matrix, row-major.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n = 0) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

inline constexpr double kDefaultTauT = 0.05;
inline constexpr double kDefaultTauS = 0.02;

struct ConfusionStats {
  SquareMatrix T;
  SquareMatrix S;
  double tau_T = kDefaultTauT;
  double tau_S = kDefaultTauS;
};

struct ConfusionGroups {
  /// Each group has at least two classes, ids ascending; groups are ordered
  /// by their smallest member.
  std::vector<std::vector<ClassId>> groups;
  std::vector<ClassId> ungrouped;

  bool operator==(const ConfusionGroups&) const = default;
};

/// (ground truth, predicted) for one validation sample.
using TruthPrediction = std::pair<ClassId, ClassId>;

/// T(i, j): share of class-i samples predicted as j. Rows of classes with no
/// samples stay zero.
SquareMatrix compute_T(std::span<const TruthPrediction> predictions,
                       std::size_t num_classes);

/// One validation prediction: the predicted class and the top-five classes
/// with their raw (unnormalized) probabilities.
struct TopRecord {
  ClassId predicted = 0;
  std::vector<std::pair<ClassId, double>> top;
};

/// S(i, j): average over samples predicted as i of the top-five-normalized
/// probability of j (zero when j is not among the top five). Throws DataError
/// when a record's predicted class is not its top entry.
SquareMatrix compute_S(std::span<const TopRecord> records, std::size_t num_classes);

/// Classes i != j are related when T or S exceeds its threshold in either
/// direction; groups are the connected components with two or more members.
ConfusionGroups build_groups(const ConfusionStats& stats);

/// Two-column table "group<TAB>extensions" (comma-separated), one row per
/// group.
std::string format_groups(const ConfusionGroups& groups, const LabelMap& labels);

/// Full matrix dump with class-name header row and first column.
std::string format_square_matrix(const SquareMatrix& matrix, const LabelMap& labels);

}  // namespace ftdetect
