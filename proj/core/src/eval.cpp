#include "sessbot/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sessbot/error.hpp"
#include "sessbot/parallel.hpp"
#include "sessbot/random.hpp"

namespace sessbot {

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DomainError("scores and labels differ in length");
  std::size_t positives = 0;
  for (auto l : labels) {
    if (l > 1) throw DomainError("labels must be 0 or 1");
    positives += l;
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DomainError("ROC is undefined unless both classes are present");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw DomainError("NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]]) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives), s});
  }
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

double interpolate_tpr(const RocCurve& curve, double fpr) {
  const auto& pts = curve.points;
  if (pts.empty()) throw DomainError("empty ROC curve");
  std::size_t i = 0;
  while (i + 1 < pts.size() && pts[i + 1].fpr <= fpr) ++i;
  if (i + 1 == pts.size() || pts[i].fpr >= fpr) return pts[i].tpr;
  const auto& a = pts[i];
  const auto& b = pts[i + 1];
  return a.tpr + (b.tpr - a.tpr) * (fpr - a.fpr) / (b.fpr - a.fpr);
}

namespace {

Folds deal(const std::vector<std::vector<std::size_t>>& by_class, std::size_t k) {
  Folds folds(k);
  std::size_t position = 0;
  for (const auto& members : by_class) {
    for (auto m : members) folds[position++ % k].push_back(m);
  }
  return folds;
}

}  // namespace

Folds stratified_kfold(std::span<const std::uint8_t> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("need at least 2 folds");
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class.at(labels[i]).push_back(i);
  for (std::size_t c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw DomainError("class " + std::to_string(c) + " has fewer members than folds");
    }
    Rng rng(derive_seed(seed, c));
    std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
  }
  auto folds = deal(by_class, k);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Folds stratified_group_kfold(std::span<const std::uint8_t> labels,
                             std::span<const std::uint32_t> groups, std::size_t k,
                             std::uint64_t seed) {
  if (k < 2) throw ConfigError("need at least 2 folds");
  if (groups.size() != labels.size()) throw DomainError("one group per row is required");
  std::vector<std::uint32_t> ids(groups.begin(), groups.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<int> group_label(ids.size(), -1);
  std::vector<std::vector<std::size_t>> rows_of(ids.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto g = static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), groups[i]) - ids.begin());
    if (group_label[g] < 0) group_label[g] = labels[i];
    rows_of[g].push_back(i);
  }
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t g = 0; g < ids.size(); ++g) {
    by_class.at(static_cast<std::size_t>(group_label[g])).push_back(g);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw DomainError("class " + std::to_string(c) + " has fewer accounts than folds");
    }
    Rng rng(derive_seed(seed, c));
    std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
  }
  const auto group_folds = deal(by_class, k);
  Folds folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (auto g : group_folds[f]) {
      folds[f].insert(folds[f].end(), rows_of[g].begin(), rows_of[g].end());
    }
    std::sort(folds[f].begin(), folds[f].end());
  }
  return folds;
}

Folds make_folds(const FeatureMatrix& data, const CvOptions& options) {
  if (options.group_by_account) {
    if (!data.has_groups()) throw ConfigError("grouping requested but rows carry no account");
    return stratified_group_kfold(data.labels(), data.groups(), options.folds, options.seed);
  }
  return stratified_kfold(data.labels(), options.folds, options.seed);
}

CvReport cross_validate(const FeatureMatrix& data, const ModelConfig& config, FeatureSet set,
                        const CvOptions& options) {
  return cross_validate(data, config, set, make_folds(data, options), options.threads);
}

CvReport cross_validate(const FeatureMatrix& data, const ModelConfig& config, FeatureSet set,
                        const Folds& folds, unsigned threads) {
  const FeatureMatrix x = project_matrix(data, set);
  const std::size_t k = folds.size();
  CvReport report;
  report.model_kind = config.kind;
  report.feature_set = set;
  report.fold_aucs.resize(k);
  report.fold_rocs.resize(k);

  // Folds run in parallel; threads left over go to each fold's training.
  const unsigned inner = threads > k ? threads / static_cast<unsigned>(k) : 1;
  parallel_for(k, threads, [&](std::size_t f) {
    std::vector<std::uint8_t> in_test(x.rows(), 0);
    for (auto r : folds[f]) in_test[r] = 1;
    std::vector<std::size_t> train_rows;
    train_rows.reserve(x.rows() - folds[f].size());
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (!in_test[r]) train_rows.push_back(r);
    }
    const FeatureMatrix train_set = x.select_rows(train_rows);
    const FeatureMatrix test_set = x.select_rows(folds[f]);
    ModelConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, f);
    const TrainedModel model = train(train_set, fold_config, inner);
    const auto scores = predict_proba(model, test_set, inner);
    report.fold_rocs[f] = roc_curve(scores, test_set.labels());
    report.fold_aucs[f] = auc(report.fold_rocs[f]);
  });

  report.mean_auc =
      std::accumulate(report.fold_aucs.begin(), report.fold_aucs.end(), 0.0) /
      static_cast<double>(k);
  double ss = 0.0;
  for (double a : report.fold_aucs) ss += (a - report.mean_auc) * (a - report.mean_auc);
  report.std_auc = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;

  for (std::size_t g = 0; g < kMeanRocGridSize; ++g) {
    const double fpr = static_cast<double>(g) / static_cast<double>(kMeanRocGridSize - 1);
    double sum = 0.0;
    for (const auto& roc : report.fold_rocs) sum += interpolate_tpr(roc, fpr);
    report.mean_roc.points.push_back(
        {fpr, sum / static_cast<double>(k), std::numeric_limits<double>::quiet_NaN()});
  }
  return report;
}

std::vector<AblationEntry> ablation(const FeatureMatrix& data,
                                   std::span<const ModelConfig> configs,
                                   const CvOptions& options) {
  const Folds folds = make_folds(data, options);
  std::vector<AblationEntry> out;
  for (const auto& config : configs) {
    AblationEntry e;
    e.full = cross_validate(data, config, FeatureSet::Full, folds, options.threads);
    e.baseline = cross_validate(data, config, FeatureSet::Baseline, folds, options.threads);
    e.delta = e.full.mean_auc - e.baseline.mean_auc;
    out.push_back(std::move(e));
  }
  return out;
}

FeatureMatrix with_permuted_session_columns(const FeatureMatrix& data, std::uint64_t seed) {
  std::vector<std::size_t> session_cols;
  for (std::size_t i = 0; i < kSessionFeatureCount; ++i) {
    session_cols.push_back(data.column_index(std::string(kFeatureNames[i])));
  }
  std::vector<std::size_t> perm(data.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  FeatureMatrix out = data;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (auto c : session_cols) out.at(r, c) = data.at(perm[r], c);
  }
  return out;
}

std::vector<SweepPoint> threshold_sweep_tpr(const TrainedModel& model, const FeatureMatrix& data,
                                            std::span<const double> account_scores,
                                            std::span<const double> theta_grid,
                                            double decision_threshold, unsigned threads) {
  if (theta_grid.empty()) throw ConfigError("empty theta grid");
  if (account_scores.size() != data.rows()) {
    throw DomainError("one account score per row is required");
  }
  FeatureMatrix aligned = data;
  if (data.column_names() != model.feature_names) {
    std::vector<std::size_t> cols;
    for (const auto& name : model.feature_names) cols.push_back(data.column_index(name));
    aligned = data.select_columns(cols);
  }
  const auto scores = predict_proba(model, aligned, threads);
  std::vector<SweepPoint> out;
  for (double theta : theta_grid) {
    SweepPoint p;
    p.theta = theta;
    std::size_t called = 0;
    for (std::size_t r = 0; r < scores.size(); ++r) {
      if (account_scores[r] < theta) continue;
      ++p.n_positive_tweets;
      if (scores[r] >= decision_threshold) ++called;
    }
    if (p.n_positive_tweets > 0) {
      p.tpr = static_cast<double>(called) / static_cast<double>(p.n_positive_tweets);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace sessbot
