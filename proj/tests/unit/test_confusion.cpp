#include <gtest/gtest.h>

#include <set>

#include "ftdetect/confusion.hpp"
#include "ftdetect/error.hpp"
#include "ftdetect/rng.hpp"

using namespace ftdetect;

namespace {

SquareMatrix identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

TopRecord record(ClassId predicted, std::vector<std::pair<ClassId, double>> top) {
  return {predicted, std::move(top)};
}

// For every class, the id of its group (or its own id + 1000 if ungrouped).
std::vector<std::size_t> membership(const ConfusionGroups& g, std::size_t n) {
  std::vector<std::size_t> of(n, SIZE_MAX);
  for (std::size_t k = 0; k < g.groups.size(); ++k)
    for (ClassId c : g.groups[k]) of[c] = k;
  for (ClassId c : g.ungrouped) of[c] = 1000 + c;
  return of;
}

}  // namespace

TEST(ComputeT, Examples) {
  const std::vector<TruthPrediction> four{{0, 0}, {0, 0}, {0, 0}, {0, 1}};
  auto t = compute_T(four, 2);
  EXPECT_EQ(t(0, 0), 0.75);
  EXPECT_EQ(t(0, 1), 0.25);
  EXPECT_EQ(t(1, 0), 0.0);
  EXPECT_EQ(t(1, 1), 0.0);

  const std::vector<TruthPrediction> perfect{{0, 0}, {1, 1}, {2, 2}, {1, 1}};
  EXPECT_EQ(compute_T(perfect, 3), identity(3));

  const std::vector<TruthPrediction> single{{2, 2}};
  t = compute_T(single, 3);
  SquareMatrix expected(3);
  expected(2, 2) = 1.0;
  EXPECT_EQ(t, expected);

  EXPECT_THROW(compute_T(std::vector<TruthPrediction>{}, 2), DataError);
  EXPECT_THROW(compute_T(std::vector<TruthPrediction>{{0, 3}}, 2), DataError);
}

TEST(ComputeT, SupportedRowsSumToOne) {
  Rng rng(6);
  std::vector<TruthPrediction> pairs;
  for (int i = 0; i < 300; ++i) pairs.emplace_back(rng.below(6), rng.below(7));
  const auto t = compute_T(pairs, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_GE(t(i, j), 0.0);
      EXPECT_LE(t(i, j), 1.0);
      sum += t(i, j);
    }
    if (i < 6) EXPECT_NEAR(sum, 1.0, 1e-9);
    else EXPECT_EQ(sum, 0.0);
  }
}

TEST(ComputeS, WorkedExample) {
  const std::vector<TopRecord> one{
      record(0, {{0, 0.5}, {1, 0.2}, {2, 0.1}, {3, 0.1}, {4, 0.1}})};
  const auto s = compute_S(one, 5);
  // pn = p / 1.0 here; the sum 0.5+0.2+0.1+0.1+0.1 is 1 up to rounding.
  const double sum = 0.5 + 0.2 + 0.1 + 0.1 + 0.1;
  EXPECT_EQ(s(0, 0), 0.5 / sum);
  EXPECT_EQ(s(0, 1), 0.2 / sum);
  EXPECT_EQ(s(0, 2), 0.1 / sum);
  EXPECT_EQ(s(0, 3), 0.1 / sum);
  EXPECT_EQ(s(0, 4), 0.1 / sum);
  EXPECT_NEAR(s(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(s(0, 1), 0.2, 1e-15);
  for (std::size_t i = 1; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(s(i, j), 0.0);

  const std::vector<TopRecord> two{one[0], one[0]};
  EXPECT_EQ(compute_S(two, 5), s);
}

TEST(ComputeS, UnnormalizedTopIsRescaled) {
  const std::vector<TopRecord> r{
      record(1, {{1, 0.5}, {0, 0.2}, {2, 0.1}, {3, 0.1}, {4, 0.05}})};
  const auto s = compute_S(r, 6);
  EXPECT_NEAR(s(1, 1), 0.5 / 0.95, 1e-15);
  EXPECT_NEAR(s(1, 4), 0.05 / 0.95, 1e-15);
  EXPECT_EQ(s(1, 5), 0.0);
}

TEST(ComputeS, ConfidentClassifierHasUnitDiagonal) {
  std::vector<TopRecord> records;
  for (ClassId c = 0; c < 5; ++c) {
    std::vector<std::pair<ClassId, double>> top{{c, 1.0}};
    for (ClassId o = 0; o < 5 && top.size() < 5; ++o)
      if (o != c) top.emplace_back(o, 0.0);
    records.push_back(record(c, top));
  }
  EXPECT_EQ(compute_S(records, 5), identity(5));
}

TEST(ComputeS, RejectsMalformedRecords) {
  EXPECT_THROW(compute_S(std::vector<TopRecord>{record(1, {{0, 0.6}, {1, 0.4}})}, 2), DataError);
  EXPECT_THROW(compute_S(std::vector<TopRecord>{record(0, {{0, 0.4}, {1, 0.6}})}, 2), DataError);
  EXPECT_THROW(compute_S(std::vector<TopRecord>{record(0, {})}, 2), DataError);
}

TEST(BuildGroups, Examples) {
  ConfusionStats stats{identity(4), identity(4)};
  EXPECT_EQ(stats.tau_T, 0.05);
  EXPECT_EQ(stats.tau_S, 0.02);
  auto g = build_groups(stats);
  EXPECT_TRUE(g.groups.empty());
  EXPECT_EQ(g.ungrouped, (std::vector<ClassId>{0, 1, 2, 3}));

  stats.T(0, 1) = 0.06;
  g = build_groups(stats);
  EXPECT_EQ(g.groups, (std::vector<std::vector<ClassId>>{{0, 1}}));
  EXPECT_EQ(g.ungrouped, (std::vector<ClassId>{2, 3}));

  stats.S(1, 2) = 0.03;
  g = build_groups(stats);
  EXPECT_EQ(g.groups, (std::vector<std::vector<ClassId>>{{0, 1, 2}}));

  // exactly at the threshold does not relate
  ConfusionStats edge{identity(2), identity(2)};
  edge.T(1, 0) = 0.05;
  edge.S(0, 1) = 0.02;
  EXPECT_TRUE(build_groups(edge).groups.empty());

  // only one direction is needed
  ConfusionStats one_way{identity(3), identity(3)};
  one_way.S(2, 0) = 0.5;
  EXPECT_EQ(build_groups(one_way).groups, (std::vector<std::vector<ClassId>>{{0, 2}}));
}

TEST(BuildGroups, DiagonalNeverGroups) {
  ConfusionStats stats{SquareMatrix(3), SquareMatrix(3)};
  for (std::size_t i = 0; i < 3; ++i) stats.T(i, i) = stats.S(i, i) = 1.0;
  EXPECT_TRUE(build_groups(stats).groups.empty());
  EXPECT_THROW(build_groups(ConfusionStats{SquareMatrix(3), SquareMatrix(2)}), DataError);
}

TEST(BuildGroups, PartitionAndThresholdMonotonicity) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(10);
    ConfusionStats low{SquareMatrix(n), SquareMatrix(n)};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        low.T(i, j) = rng.uniform() < 0.8 ? 0.1 * rng.uniform() * rng.uniform() : rng.uniform();
        low.S(i, j) = rng.uniform() < 0.8 ? 0.05 * rng.uniform() * rng.uniform() : rng.uniform();
      }
    }
    low.tau_T = 0.02 + 0.05 * rng.uniform();
    low.tau_S = 0.01 + 0.03 * rng.uniform();
    ConfusionStats high = low;
    high.tau_T += 0.1 * rng.uniform();
    high.tau_S += 0.1 * rng.uniform();

    const auto gl = build_groups(low);
    const auto gh = build_groups(high);
    for (const auto* g : {&gl, &gh}) {
      std::multiset<ClassId> all(g->ungrouped.begin(), g->ungrouped.end());
      for (const auto& grp : g->groups) {
        EXPECT_GE(grp.size(), 2u);
        all.insert(grp.begin(), grp.end());
      }
      EXPECT_EQ(all.size(), n);
      EXPECT_EQ(std::set<ClassId>(all.begin(), all.end()).size(), n);
    }
    // Classes together at the higher thresholds are together at the lower ones.
    const auto ml = membership(gl, n), mh = membership(gh, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (mh[a] == mh[b]) EXPECT_EQ(ml[a], ml[b]);
    EXPECT_LE(gl.groups.size() + gl.ungrouped.size(), gh.groups.size() + gh.ungrouped.size());
  }
}

TEST(FormatGroups, TwoColumns) {
  ConfusionGroups g;
  g.groups = {{0, 2}};
  g.ungrouped = {1};
  const LabelMap labels({"yaml", "c", "yml"});
  // sorted labels: c, yaml, yml
  EXPECT_EQ(format_groups(g, labels), "group\textensions\n0\tc,yml\n");
  SquareMatrix m(3);
  m(0, 1) = 0.25;
  EXPECT_EQ(format_square_matrix(m, labels),
            "class\tc\tyaml\tyml\nc\t0\t0.25\t0\nyaml\t0\t0\t0\nyml\t0\t0\t0\n");
}
