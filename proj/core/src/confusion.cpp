#include "ftdetect/confusion.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ftdetect/error.hpp"
#include "ftdetect/escape.hpp"

namespace ftdetect {

SquareMatrix compute_T(std::span<const TruthPrediction> predictions,
                       std::size_t num_classes) {
  if (predictions.empty()) throw DataError("no predictions to compute T from");
  SquareMatrix counts(num_classes);
  std::vector<double> support(num_classes, 0.0);
  for (const auto& [truth, predicted] : predictions) {
    if (truth >= num_classes || predicted >= num_classes) {
      throw DataError("class id out of range in prediction list");
    }
    counts(truth, predicted) += 1.0;
    support[truth] += 1.0;
  }
  for (std::size_t i = 0; i < num_classes; ++i) {
    if (support[i] == 0.0) continue;
    for (std::size_t j = 0; j < num_classes; ++j) counts(i, j) /= support[i];
  }
  return counts;
}

SquareMatrix compute_S(std::span<const TopRecord> records, std::size_t num_classes) {
  SquareMatrix sums(num_classes);
  std::vector<double> predicted_count(num_classes, 0.0);
  for (const auto& record : records) {
    if (record.top.empty() || record.top.front().first != record.predicted) {
      throw DataError("prediction record does not lead with its predicted class");
    }
    double total = 0.0;
    for (const auto& [id, p] : record.top) {
      if (id >= num_classes) throw DataError("class id out of range in top list");
      if (p > record.top.front().second) {
        throw DataError("predicted class is not the most probable in its record");
      }
      total += p;
    }
    predicted_count[record.predicted] += 1.0;
    if (total <= 0.0) continue;
    for (const auto& [id, p] : record.top) sums(record.predicted, id) += p / total;
  }
  for (std::size_t i = 0; i < num_classes; ++i) {
    if (predicted_count[i] == 0.0) continue;
    for (std::size_t j = 0; j < num_classes; ++j) sums(i, j) /= predicted_count[i];
  }
  return sums;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ConfusionGroups build_groups(const ConfusionStats& stats) {
  const std::size_t n = stats.T.size();
  if (stats.S.size() != n) throw DataError("T and S have different shapes");

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (stats.T(i, j) > stats.tau_T || stats.S(i, j) > stats.tau_S) sets.unite(i, j);
    }
  }

  std::map<std::size_t, std::vector<ClassId>> components;
  for (std::size_t i = 0; i < n; ++i) {
    components[sets.find(i)].push_back(static_cast<ClassId>(i));
  }
  ConfusionGroups out;
  for (auto& [root, members] : components) {
    if (members.size() >= 2) {
      out.groups.push_back(std::move(members));
    } else {
      out.ungrouped.push_back(members.front());
    }
  }
  std::sort(out.ungrouped.begin(), out.ungrouped.end());
  return out;
}

std::string format_groups(const ConfusionGroups& groups, const LabelMap& labels) {
  std::string out = "group\textensions\n";
  for (std::size_t g = 0; g < groups.groups.size(); ++g) {
    out += std::to_string(g) + "\t";
    for (std::size_t k = 0; k < groups.groups[g].size(); ++k) {
      if (k) out += ",";
      out += escape_field(labels.name(groups.groups[g][k]));
    }
    out += "\n";
  }
  return out;
}

std::string format_square_matrix(const SquareMatrix& matrix, const LabelMap& labels) {
  std::string out = "class";
  for (std::size_t j = 0; j < matrix.size(); ++j) {
    out += "\t" + escape_field(labels.name(static_cast<ClassId>(j)));
  }
  out += "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += escape_field(labels.name(static_cast<ClassId>(i)));
    for (std::size_t j = 0; j < matrix.size(); ++j) out += "\t" + format_real(matrix(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace ftdetect
