#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sessbot/features.hpp"
#include "sessbot/matrix.hpp"
#include "sessbot/models.hpp"

namespace sessbot {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
};

/// Starts at (0,0) and ends at (1,1); tied scores form one diagonal step.
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Throws DomainError unless both classes are present and lengths agree.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> labels);

double auc(const RocCurve& curve);

/// TPR of `curve` at `fpr`, interpolated linearly; at a vertical step the
/// top of the step is taken.
double interpolate_tpr(const RocCurve& curve, double fpr);

using Folds = std::vector<std::vector<std::size_t>>;

/// Each class is shuffled with `seed` and dealt round-robin across the k
/// folds. Throws DomainError if a class has fewer than k members.
Folds stratified_kfold(std::span<const std::uint8_t> labels, std::size_t k, std::uint64_t seed);

/// Same dealing applied to whole groups (accounts), each group taking the
/// label of its rows. Throws DomainError if a class has fewer than k groups.
Folds stratified_group_kfold(std::span<const std::uint8_t> labels,
                             std::span<const std::uint32_t> groups, std::size_t k,
                             std::uint64_t seed);

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  bool group_by_account = false;
  unsigned threads = 1;
};

inline constexpr std::size_t kMeanRocGridSize = 101;

struct CvReport {
  ModelKind model_kind = ModelKind::DecisionTree;
  FeatureSet feature_set = FeatureSet::Full;
  std::vector<double> fold_aucs;
  std::vector<RocCurve> fold_rocs;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // sample standard deviation across folds
  RocCurve mean_roc;     // vertical average on the FPR grid 0, 0.01, ..., 1
};

Folds make_folds(const FeatureMatrix& data, const CvOptions& options);

CvReport cross_validate(const FeatureMatrix& data, const ModelConfig& config, FeatureSet set,
                        const CvOptions& options);

/// Cross-validation on precomputed folds.
CvReport cross_validate(const FeatureMatrix& data, const ModelConfig& config, FeatureSet set,
                        const Folds& folds, unsigned threads = 1);

struct AblationEntry {
  CvReport full;
  CvReport baseline;
  double delta = 0.0;  // full.mean_auc - baseline.mean_auc
};

/// Full and Baseline runs share one fold assignment per model.
std::vector<AblationEntry> ablation(const FeatureMatrix& data,
                                   std::span<const ModelConfig> configs,
                                   const CvOptions& options);

/// Copy of a 9-column matrix whose three session columns are permuted
/// jointly across rows, cutting their link to the label.
FeatureMatrix with_permuted_session_columns(const FeatureMatrix& data, std::uint64_t seed);

struct SweepPoint {
  double theta = 0.0;
  std::size_t n_positive_tweets = 0;
  std::optional<double> tpr;  // empty when there are no positives
};

/// For each theta, the positives are the rows whose account score is at
/// least theta; TPR is the share of them the model scores at or above
/// `decision_threshold`. Throws ConfigError on an empty grid.
std::vector<SweepPoint> threshold_sweep_tpr(const TrainedModel& model, const FeatureMatrix& data,
                                            std::span<const double> account_scores,
                                            std::span<const double> theta_grid,
                                            double decision_threshold = 0.5,
                                            unsigned threads = 1);

}  // namespace sessbot
