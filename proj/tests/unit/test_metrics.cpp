#include <gtest/gtest.h>

#include <numeric>

#include "ftdetect/error.hpp"
#include "ftdetect/metrics.hpp"
#include "ftdetect/rng.hpp"

using namespace ftdetect;

namespace {

ConfusionMatrix from(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix m(rows.size());
  for (ClassId i = 0; i < rows.size(); ++i) {
    for (ClassId j = 0; j < rows.size(); ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

ConfusionMatrix random_matrix(Rng& rng, std::size_t n) {
  ConfusionMatrix m(n);
  for (ClassId i = 0; i < n; ++i) {
    for (ClassId j = 0; j < n; ++j) m.set(i, j, rng.below(i == j ? 50 : 8));
  }
  if (m.total() == 0) m.set(0, 0, 1);
  return m;
}

}  // namespace

TEST(ConfusionMatrix, Accumulate) {
  ConfusionMatrix m(2);
  m.accumulate(0, 1);
  EXPECT_EQ(m, from({{0, 1}, {0, 0}}));
  EXPECT_THROW(m.accumulate(2, 0), DataError);

  Rng rng(4);
  std::vector<std::pair<ClassId, ClassId>> pairs;
  for (int i = 0; i < 200; ++i) pairs.emplace_back(rng.below(3), rng.below(3));
  ConfusionMatrix a(3), b(3);
  for (const auto& [t, p] : pairs) a.accumulate(t, p);
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) b.accumulate(it->first, it->second);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.total(), 200u);

  ConfusionMatrix half1(3), half2(3);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    (i % 2 ? half1 : half2).accumulate(pairs[i].first, pairs[i].second);
  }
  half1.merge(half2);
  EXPECT_EQ(half1, a);
}

TEST(Report, PerfectDiagonal) {
  const auto r = report(from({{5, 0}, {0, 5}}));
  for (const auto& s : r.per_class) {
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
    EXPECT_EQ(s.f1, 1.0);
  }
  EXPECT_EQ(r.micro.f1, 1.0);
  EXPECT_EQ(r.macro.f1, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Report, ThreeOneOneThree) {
  const auto r = report(from({{3, 1}, {1, 3}}));
  for (const auto& s : r.per_class) {
    EXPECT_EQ(s.precision, 0.75);
    EXPECT_EQ(s.recall, 0.75);
    EXPECT_EQ(s.f1, 0.75);
    EXPECT_EQ(s.support, 4u);
  }
  EXPECT_EQ(r.accuracy, 0.75);
}

TEST(Report, UnsupportedClassCountsAsZeroInMacro) {
  const auto m = from({{4, 0, 0}, {0, 4, 0}, {0, 0, 0}});
  const auto r = report(m);
  EXPECT_EQ(r.per_class[2].precision, 0.0);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
  EXPECT_DOUBLE_EQ(r.macro.f1, 2.0 / 3.0);
  const auto supported = report(m, ReportOptions{true});
  EXPECT_EQ(supported.macro.f1, 1.0);
  EXPECT_THROW(report(ConfusionMatrix(2)), DataError);
}

TEST(Report, MicroIdentityOnRandomMatrices) {
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_matrix(rng, 2 + rng.below(8));
    const auto r = report(m);
    const double direct = static_cast<double>(m.trace()) / static_cast<double>(m.total());
    EXPECT_EQ(r.micro.precision, direct);
    EXPECT_EQ(r.accuracy, direct);
    EXPECT_EQ(r.micro.recall, direct);
    EXPECT_EQ(r.micro.f1, direct);
    for (const auto& s : r.per_class) {
      for (double x : {s.precision, s.recall, s.f1}) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
    }
  }
}

TEST(Report, ScaleAndPermutationInvariance) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    const auto m = random_matrix(rng, n);
    const auto r = report(m);

    ConfusionMatrix scaled(n);
    const std::uint64_t k = 1 + rng.below(9);
    for (ClassId i = 0; i < n; ++i)
      for (ClassId j = 0; j < n; ++j) scaled.set(i, j, m.count(i, j) * k);
    const auto rs = report(scaled);
    EXPECT_EQ(rs.accuracy, r.accuracy);
    EXPECT_DOUBLE_EQ(rs.macro.f1, r.macro.f1);
    for (ClassId i = 0; i < n; ++i) EXPECT_DOUBLE_EQ(rs.per_class[i].f1, r.per_class[i].f1);

    std::vector<ClassId> perm(n);
    std::iota(perm.begin(), perm.end(), ClassId{0});
    rng.shuffle(perm);
    ConfusionMatrix permuted(n);
    for (ClassId i = 0; i < n; ++i)
      for (ClassId j = 0; j < n; ++j) permuted.set(perm[i], perm[j], m.count(i, j));
    const auto rp = report(permuted);
    EXPECT_EQ(rp.accuracy, r.accuracy);
    EXPECT_NEAR(rp.macro.f1, r.macro.f1, 1e-15);
    for (ClassId i = 0; i < n; ++i) {
      EXPECT_EQ(rp.per_class[perm[i]].precision, r.per_class[i].precision);
      EXPECT_EQ(rp.per_class[perm[i]].recall, r.per_class[i].recall);
    }
  }
}

TEST(Report, DiagonalImbalancedMacroF1IsOne) {
  EXPECT_EQ(report(from({{100, 0, 0}, {0, 1, 0}, {0, 0, 7}})).macro.f1, 1.0);
}

TEST(Report, TableOrderedBySupport) {
  const auto m = from({{1, 0, 0}, {0, 9, 0}, {0, 1, 4}});
  const auto r = report(m);
  EXPECT_EQ(order_by_support(r), (std::vector<ClassId>{1, 2, 0}));
  const LabelMap labels({"aa", "bb", "cc"});
  const std::string table = format_report_table(r, labels);
  EXPECT_LT(table.find("\nbb "), table.find("\ncc "));
  EXPECT_LT(table.find("\ncc "), table.find("\naa "));
  EXPECT_NE(table.find("accuracy"), std::string::npos);

  const std::string tsv = format_report_tsv(r, labels);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "class_id\textension\tprecision\trecall\tf1\tsupport");
  EXPECT_NE(tsv.find("1\tbb\t0.9\t1\t0.9473684210526316\t9\n"), std::string::npos) << tsv;

  EXPECT_EQ(format_confusion_matrix(m, labels),
            "truth\\predicted\taa\tbb\tcc\naa\t1\t0\t0\nbb\t0\t9\t0\ncc\t0\t1\t4\n");
}
