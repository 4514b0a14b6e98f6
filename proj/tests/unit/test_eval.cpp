#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "sessbot/error.hpp"
#include "sessbot/eval.hpp"

using namespace sessbot;

namespace {

using Labels = std::vector<std::uint8_t>;

FeatureMatrix leak_matrix(std::size_t n, std::uint64_t seed) {
  // label == is_retweet; other columns are noise.
  FeatureMatrix m({"session_ordinal", "position_in_session", "session_length", "is_retweet",
                   "is_reply", "n_mentions", "n_hashtags", "n_urls", "text_length"});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double rt = static_cast<double>(rng() % 2);
    const std::vector<double> x = {double(1 + rng() % 5), double(1 + rng() % 20), 20,
                                   rt, double(rng() % 2), double(rng() % 3), 0, 0,
                                   double(rng() % 100)};
    m.add_row(x, static_cast<std::uint8_t>(rt), static_cast<std::uint32_t>(i / 10));
  }
  return m;
}

}  // namespace

TEST(Roc, PerfectSeparation) {
  const auto c = roc_curve(std::vector<double>{0.9, 0.8, 0.4, 0.2}, Labels{1, 1, 0, 0});
  bool corner = false;
  for (const auto& p : c.points) corner = corner || (p.fpr == 0.0 && p.tpr == 1.0);
  EXPECT_TRUE(corner);
  EXPECT_DOUBLE_EQ(auc(c), 1.0);
  EXPECT_EQ(c.points.front().fpr, 0.0);
  EXPECT_EQ(c.points.front().tpr, 0.0);
  EXPECT_TRUE(std::isinf(c.points.front().threshold));
  EXPECT_EQ(c.points.back().fpr, 1.0);
  EXPECT_EQ(c.points.back().tpr, 1.0);
}

TEST(Roc, AllScoresEqual) {
  const auto c = roc_curve(std::vector<double>{0.3, 0.3, 0.3}, Labels{1, 0, 1});
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_DOUBLE_EQ(auc(c), 0.5);
}

TEST(Roc, HandComputedAuc) {
  const auto c = roc_curve(std::vector<double>{0.1, 0.4, 0.35, 0.8}, Labels{0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(auc(c), 0.75);
}

TEST(Roc, Errors) {
  EXPECT_THROW(roc_curve(std::vector<double>{0.1, 0.2}, Labels{1, 1}), DomainError);
  EXPECT_THROW(roc_curve(std::vector<double>{0.1}, Labels{1, 0}), DomainError);
}

TEST(Roc, TrapezoidEqualsPairwiseStatistic) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> s(n);
    Labels y(n);
    const int grid = trial % 2 ? 5 : 1000000;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % grid) / grid;
      y[i] = rng() % 2;
    }
    y[0] = 0;
    y[1] = 1;
    const auto c = roc_curve(s, y);
    ASSERT_NEAR(auc(c), oracle::pairwise_auc(s, y), 1e-9);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      ASSERT_GE(c.points[i].fpr, c.points[i - 1].fpr);
      ASSERT_GE(c.points[i].tpr, c.points[i - 1].tpr);
    }
  }
}

TEST(Roc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(60), t(60);
    Labels y(60);
    for (std::size_t i = 0; i < 60; ++i) {
      s[i] = static_cast<double>(rng() % 20) / 20.0;
      t[i] = std::exp(3 * s[i]) - 7;
      y[i] = i < 2 ? static_cast<std::uint8_t>(i) : static_cast<std::uint8_t>(rng() % 2);
    }
    const auto a = roc_curve(s, y), b = roc_curve(t, y);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      ASSERT_EQ(a.points[i].fpr, b.points[i].fpr);
      ASSERT_EQ(a.points[i].tpr, b.points[i].tpr);
    }
  }
}

TEST(Roc, InterpolationTakesTopOfVerticalStep) {
  const auto c = roc_curve(std::vector<double>{0.9, 0.8, 0.4, 0.2}, Labels{1, 1, 0, 0});
  EXPECT_DOUBLE_EQ(interpolate_tpr(c, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(interpolate_tpr(c, 0.5), 1.0);
  const auto d = roc_curve(std::vector<double>{0.5, 0.5}, Labels{1, 0});
  EXPECT_DOUBLE_EQ(interpolate_tpr(d, 0.25), 0.25);
}

TEST(Folds, ExactDivisibility) {
  Labels y(20, 0);
  for (std::size_t i = 0; i < 10; ++i) y[i] = 1;
  const auto f = stratified_kfold(y, 10, 1);
  ASSERT_EQ(f.size(), 10u);
  for (const auto& fold : f) {
    ASSERT_EQ(fold.size(), 2u);
    EXPECT_EQ(y[fold[0]] + y[fold[1]], 1);
  }
}

TEST(Folds, PartitionAndBalance) {
  Labels y(1000, 0);
  for (std::size_t i = 0; i < 100; ++i) y[i * 10 + 3] = 1;
  const auto f = stratified_kfold(y, 10, 99);
  std::set<std::size_t> all;
  for (const auto& fold : f) {
    std::size_t pos = 0;
    for (auto i : fold) {
      ASSERT_TRUE(all.insert(i).second);
      pos += y[i];
    }
    EXPECT_GE(pos, 9u);
    EXPECT_LE(pos, 11u);
  }
  EXPECT_EQ(all.size(), 1000u);
  EXPECT_EQ(stratified_kfold(y, 10, 99), f);
  EXPECT_NE(stratified_kfold(y, 10, 98), f);
}

TEST(Folds, RandomProportions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 50 + rng() % 500, k = 2 + rng() % 9;
    Labels y(n);
    for (auto& v : y) v = rng() % 4 == 0;
    std::size_t pos = std::count(y.begin(), y.end(), 1);
    if (pos < k || n - pos < k) continue;
    const auto f = stratified_kfold(y, k, trial);
    for (const auto& fold : f) {
      const double expect = static_cast<double>(pos) * static_cast<double>(fold.size()) / n;
      const double got = static_cast<double>(std::count_if(fold.begin(), fold.end(), [&](auto i) { return y[i]; }));
      ASSERT_LE(std::abs(got - expect), 1.0 + 1e-9);
    }
  }
}

TEST(Folds, SmallClassRejected) {
  Labels y = {1, 1, 0, 0, 0, 0};
  EXPECT_THROW(stratified_kfold(y, 3, 0), DomainError);
}

TEST(Folds, GroupsStayTogether) {
  const auto m = leak_matrix(400, 1);
  const auto f = stratified_group_kfold(m.labels(), m.groups(), 5, 3);
  std::map<std::uint32_t, std::size_t> fold_of;
  std::size_t total = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    total += f[k].size();
    for (auto i : f[k]) {
      auto [it, fresh] = fold_of.emplace(m.groups()[i], k);
      ASSERT_EQ(it->second, k);
      (void)fresh;
    }
  }
  EXPECT_EQ(total, 400u);
}

TEST(CrossValidate, LabelLeakGivesPerfectFolds) {
  const auto m = leak_matrix(500, 2);
  CvOptions o;
  const auto r = cross_validate(m, ModelConfig::defaults(ModelKind::DecisionTree), FeatureSet::Full, o);
  ASSERT_EQ(r.fold_aucs.size(), 10u);
  for (double a : r.fold_aucs) EXPECT_DOUBLE_EQ(a, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_auc, 1.0);
  EXPECT_EQ(r.mean_roc.points.size(), kMeanRocGridSize);
}

TEST(CrossValidate, RandomLabelsHoverAtOneHalf) {
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto m = leak_matrix(400, seed);
    FeatureMatrix shuffled(m.column_names());
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const auto row = m.row(i);
      shuffled.add_row(std::vector<double>(row.begin(), row.end()),
                       static_cast<std::uint8_t>(rng() % 2));
    }
    m = std::move(shuffled);
    CvOptions o;
    o.seed = seed;
    auto c = ModelConfig::defaults(ModelKind::RandomForest, seed);
    c.n_estimators = 20;
    const auto r = cross_validate(m, c, FeatureSet::Baseline, o);
    EXPECT_NEAR(r.mean_auc, 0.5, 0.1);
    sum += r.mean_auc;
  }
  EXPECT_NEAR(sum / 10, 0.5, 0.05);
}

TEST(CrossValidate, ReportInvariantsAndThreadIndependence) {
  const auto m = leak_matrix(300, 3);
  CvOptions o;
  o.folds = 5;
  auto c = ModelConfig::defaults(ModelKind::ExtraTrees, 1);
  c.n_estimators = 10;
  const auto a = cross_validate(m, c, FeatureSet::Baseline, o);
  o.threads = 4;
  const auto b = cross_validate(m, c, FeatureSet::Baseline, o);
  EXPECT_EQ(a.fold_aucs, b.fold_aucs);
  double mean = 0;
  for (double v : a.fold_aucs) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    mean += v;
  }
  EXPECT_NEAR(a.mean_auc, mean / 5, 1e-15);
  EXPECT_EQ(a.model_kind, ModelKind::ExtraTrees);
  EXPECT_EQ(a.feature_set, FeatureSet::Baseline);
}

TEST(CrossValidate, FoldsDependOnlyOnLabels) {
  auto a = leak_matrix(200, 4);
  auto b = with_permuted_session_columns(a, 77);
  CvOptions o;
  EXPECT_EQ(make_folds(a, o), make_folds(b, o));
  EXPECT_EQ(make_folds(a, o), stratified_kfold(a.labels(), 10, o.seed));
}

TEST(Ablation, PairedFoldsAndDelta) {
  const auto m = leak_matrix(300, 5);
  std::vector<ModelConfig> cs = {ModelConfig::defaults(ModelKind::DecisionTree, 2)};
  CvOptions o;
  o.folds = 5;
  const auto e = ablation(m, cs, o);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_DOUBLE_EQ(e[0].delta, e[0].full.mean_auc - e[0].baseline.mean_auc);
  const auto full = cross_validate(m, cs[0], FeatureSet::Full, o);
  EXPECT_EQ(full.fold_aucs, e[0].full.fold_aucs);
}

TEST(Ablation, PermutedSessionColumnsKeepMarginals) {
  const auto m = leak_matrix(100, 6);
  const auto p = with_permuted_session_columns(m, 1);
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> a, b;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      a.push_back(m.at(r, c));
      b.push_back(p.at(r, c));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 3; c < 9; ++c) ASSERT_EQ(m.at(r, c), p.at(r, c));
  }
}

TEST(Sweep, DegenerateThresholds) {
  const auto m = leak_matrix(200, 7);
  const auto model = train(project_matrix(m, FeatureSet::Baseline),
                           ModelConfig::defaults(ModelKind::DecisionTree, 1));
  std::vector<double> scores(m.rows());
  std::mt19937_64 rng(1);
  for (auto& s : scores) s = static_cast<double>(rng() % 100) / 100.0;
  const std::vector<double> grid = {0.0, 0.3, 0.6, 0.99, 1.0};
  const auto pts = threshold_sweep_tpr(model, m, scores, grid);
  ASSERT_EQ(pts.size(), grid.size());
  EXPECT_EQ(pts[0].n_positive_tweets, m.rows());
  double called = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) called += predict_proba(model, project_matrix(m, FeatureSet::Baseline).row(r)) >= 0.5;
  EXPECT_DOUBLE_EQ(*pts[0].tpr, called / static_cast<double>(m.rows()));
  EXPECT_FALSE(pts[4].tpr.has_value());
  EXPECT_EQ(pts[4].n_positive_tweets, 0u);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].n_positive_tweets, pts[i - 1].n_positive_tweets);
  }
  EXPECT_THROW(threshold_sweep_tpr(model, m, scores, std::vector<double>{}), ConfigError);
}
