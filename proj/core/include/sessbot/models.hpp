#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sessbot/matrix.hpp"

namespace sessbot {

using Rng = std::mt19937_64;

enum class ModelKind { DecisionTree, ExtraTrees, RandomForest, AdaBoost, Knn };

// Short CLI names: dt, et, rf, ab, knn.
const char* to_string(ModelKind kind) noexcept;
ModelKind model_kind_from_string(std::string_view name);

enum class FeaturesPerSplit { All, Sqrt };

struct ModelConfig {
  ModelKind kind = ModelKind::DecisionTree;
  int n_estimators = 1;
  std::optional<int> max_depth;  // unbounded when empty
  int min_samples_split = 2;
  FeaturesPerSplit features_per_split = FeaturesPerSplit::All;
  bool bootstrap = false;  // RandomForest only
  double learning_rate = 1.0;
  int k_neighbors = 5;
  std::uint64_t seed = 0;

  // 100 trees with sqrt features for the forests, 50 depth-1 rounds for
  // AdaBoost, k = 5 for kNN, one unbounded tree otherwise.
  static ModelConfig defaults(ModelKind kind, std::uint64_t seed = 0);

  void validate() const;  // throws ConfigError
};

/// Flat CART node. Internal nodes route x left iff x[feature] <= threshold;
/// leaves carry the (weighted) class mass that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight0 = 0.0;
  double weight1 = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  double positive_fraction() const noexcept { return weight1 / (weight0 + weight1); }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return leaf(x).positive_fraction(); }
  std::size_t depth() const;
  std::size_t leaf_count() const;
};

struct KnnState {
  std::vector<double> means;
  std::vector<double> scales;  // 1/std, or 0 for a constant feature
  std::vector<double> points;  // standardized training rows, row-major
  std::vector<std::uint8_t> labels;
};

struct TrainedModel {
  ModelConfig config;
  std::vector<std::string> feature_names;
  std::vector<Tree> trees;
  std::vector<double> alphas;  // AdaBoost estimator weights
  KnnState knn;

  std::size_t n_features() const noexcept { return feature_names.size(); }
};

/// 1 - p0^2 - p1^2. Throws DomainError if both counts are zero.
double gini(double count0, double count1);

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

enum class SplitRule {
  Midpoint,         // exhaustive scan of midpoints between distinct values
  RandomThreshold,  // one uniform threshold in [min, max) per feature
};

/// Best Gini split of all rows over `candidate_features`. Ties go to the
/// lowest feature index, then the lowest threshold. Returns nothing when
/// no split has positive impurity decrease.
std::optional<Split> best_split(const FeatureMatrix& data,
                                std::span<const std::size_t> candidate_features,
                                SplitRule rule, Rng& rng);

/// Same as above with per-row sample weights.
std::optional<Split> best_split(const FeatureMatrix& data, std::span<const double> weights,
                                std::span<const std::size_t> candidate_features,
                                SplitRule rule, Rng& rng);

TrainedModel train_tree(const FeatureMatrix& data, const ModelConfig& config, Rng& rng);

/// RandomForest (bootstrap + midpoint splits) or ExtraTrees (full sample +
/// random thresholds). Estimator i draws from its own stream derived from
/// (config.seed, i), so the result does not depend on `threads`.
TrainedModel train_forest(const FeatureMatrix& data, const ModelConfig& config,
                          unsigned threads = 1);

struct BoostRound {
  double error = 0.0;  // weighted error of the round's stump
  double alpha = 0.0;
  // Ensemble state after the round, measured under the initial uniform weights.
  double exponential_loss = 0.0;
  double training_error = 0.0;
};

/// Discrete two-class AdaBoost over weighted depth-limited trees.
TrainedModel train_adaboost(const FeatureMatrix& data, const ModelConfig& config,
                            std::vector<BoostRound>* trace = nullptr);

TrainedModel train_knn(const FeatureMatrix& data, const ModelConfig& config);

TrainedModel train(const FeatureMatrix& data, const ModelConfig& config, unsigned threads = 1);

/// Probability-like score in [0, 1]. Throws DomainError on arity mismatch.
double predict_proba(const TrainedModel& model, std::span<const double> x);

std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& data,
                                  unsigned threads = 1);

/// Indices of the k nearest standardized training rows, nearest first.
std::vector<std::size_t> knn_neighbours(const TrainedModel& model, std::span<const double> x);

/// Versioned JSON document.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view json);

}  // namespace sessbot
