#include "sessbot/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sessbot/error.hpp"
#include "sessbot/parallel.hpp"
#include "tree_internal.hpp"

namespace sessbot {

namespace {

const double kMaxAlpha = std::log(1e9);

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::DecisionTree: return "dt";
    case ModelKind::ExtraTrees: return "et";
    case ModelKind::RandomForest: return "rf";
    case ModelKind::AdaBoost: return "ab";
    case ModelKind::Knn: return "knn";
  }
  return "dt";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "dt" || name == "decision_tree") return ModelKind::DecisionTree;
  if (name == "et" || name == "extra_trees") return ModelKind::ExtraTrees;
  if (name == "rf" || name == "random_forest") return ModelKind::RandomForest;
  if (name == "ab" || name == "adaboost") return ModelKind::AdaBoost;
  if (name == "knn") return ModelKind::Knn;
  throw ValidationError("unknown model kind '" + std::string(name) + "'");
}

ModelConfig ModelConfig::defaults(ModelKind kind, std::uint64_t seed) {
  ModelConfig c;
  c.kind = kind;
  c.seed = seed;
  switch (kind) {
    case ModelKind::DecisionTree:
      break;
    case ModelKind::ExtraTrees:
      c.n_estimators = 100;
      c.features_per_split = FeaturesPerSplit::Sqrt;
      break;
    case ModelKind::RandomForest:
      c.n_estimators = 100;
      c.features_per_split = FeaturesPerSplit::Sqrt;
      c.bootstrap = true;
      break;
    case ModelKind::AdaBoost:
      c.n_estimators = 50;
      c.max_depth = 1;
      break;
    case ModelKind::Knn:
      break;
  }
  return c;
}

void ModelConfig::validate() const {
  if (n_estimators < 1) throw ConfigError("n_estimators must be at least 1");
  if (max_depth && *max_depth < 1) throw ConfigError("max_depth must be at least 1");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be at least 2");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be at least 1");
}

TrainedModel train_adaboost(const FeatureMatrix& data, const ModelConfig& config,
                            std::vector<BoostRound>* trace) {
  config.validate();
  if (data.rows() == 0) throw DomainError("cannot train on an empty dataset");
  const std::size_t n = data.rows();
  const detail::ColumnData columns(data);
  detail::GrowParams params;
  params.max_depth = config.max_depth.value_or(1);
  params.min_samples_split = config.min_samples_split;

  TrainedModel model;
  model.config = config;
  model.feature_names = data.column_names();

  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<double> margin(n, 0.0);  // sum of alpha * (+1 / -1) votes
  std::vector<std::uint8_t> vote(n);
  Rng rng(config.seed);  // unused by midpoint splits over all features
  if (trace) trace->clear();

  const auto record = [&](double error, double alpha) {
    if (!trace) return;
    BoostRound round;
    round.error = error;
    round.alpha = alpha;
    double loss = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = data.label(i) ? 1.0 : -1.0;
      loss += std::exp(-0.5 * y * margin[i]);
      if ((margin[i] >= 0.0 ? 1 : 0) != data.label(i)) ++wrong;
    }
    round.exponential_loss = loss / static_cast<double>(n);
    round.training_error = static_cast<double>(wrong) / static_cast<double>(n);
    trace->push_back(round);
  };

  for (int m = 0; m < config.n_estimators; ++m) {
    Tree stump = detail::grow_tree(columns, weights, params, rng);
    double error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& leaf = stump.leaf(data.row(i));
      vote[i] = leaf.weight1 > leaf.weight0 ? 1 : 0;
      if (vote[i] != data.label(i)) error += weights[i];
    }
    if (error >= 0.5 && !model.trees.empty()) break;
    if (error >= 0.5) {
      // Nothing beats chance; keep the stump with zero say.
      model.trees.push_back(std::move(stump));
      model.alphas.push_back(0.0);
      record(error, 0.0);
      break;
    }
    const double alpha =
        error <= 0.0 ? kMaxAlpha
                     : std::min(kMaxAlpha, config.learning_rate * std::log((1.0 - error) / error));
    model.trees.push_back(std::move(stump));
    model.alphas.push_back(alpha);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (vote[i] != data.label(i)) weights[i] *= std::exp(alpha);
      total += weights[i];
      margin[i] += vote[i] ? alpha : -alpha;
    }
    for (auto& w : weights) w /= total;
    record(error, alpha);
    if (error <= 0.0) break;
  }
  return model;
}

TrainedModel train_knn(const FeatureMatrix& data, const ModelConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(config.k_neighbors) > data.rows()) {
    throw ConfigError("k_neighbors exceeds the number of training rows");
  }
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  TrainedModel model;
  model.config = config;
  model.feature_names = data.column_names();
  auto& knn = model.knn;
  knn.means.assign(d, 0.0);
  knn.scales.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += data.at(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (data.at(r, c) - mean) * (data.at(r, c) - mean);
    var /= static_cast<double>(n);
    knn.means[c] = mean;
    knn.scales[c] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  }
  knn.points.resize(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      knn.points[r * d + c] = (data.at(r, c) - knn.means[c]) * knn.scales[c];
    }
  }
  knn.labels.assign(data.labels().begin(), data.labels().end());
  return model;
}

TrainedModel train(const FeatureMatrix& data, const ModelConfig& config, unsigned threads) {
  switch (config.kind) {
    case ModelKind::DecisionTree: {
      Rng rng(config.seed);
      return train_tree(data, config, rng);
    }
    case ModelKind::ExtraTrees:
    case ModelKind::RandomForest:
      return train_forest(data, config, threads);
    case ModelKind::AdaBoost:
      return train_adaboost(data, config);
    case ModelKind::Knn:
      return train_knn(data, config);
  }
  throw ConfigError("unknown model kind");
}

std::vector<std::size_t> knn_neighbours(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.n_features()) throw DomainError("feature arity mismatch");
  const auto& knn = model.knn;
  const std::size_t d = model.n_features();
  const std::size_t n = knn.labels.size();
  std::vector<double> query(d);
  for (std::size_t c = 0; c < d; ++c) query[c] = (x[c] - knn.means[c]) * knn.scales[c];
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double* p = knn.points.data() + r * d;
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += (p[c] - query[c]) * (p[c] - query[c]);
    dist[r] = {s, r};
  }
  const auto k = static_cast<std::size_t>(model.config.k_neighbors);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

double predict_proba(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.n_features()) throw DomainError("feature arity mismatch");
  switch (model.config.kind) {
    case ModelKind::DecisionTree:
    case ModelKind::ExtraTrees:
    case ModelKind::RandomForest: {
      double sum = 0.0;
      for (const auto& t : model.trees) sum += t.predict(x);
      return sum / static_cast<double>(model.trees.size());
    }
    case ModelKind::AdaBoost: {
      double yes = 0.0, total = 0.0;
      for (std::size_t m = 0; m < model.trees.size(); ++m) {
        const auto& leaf = model.trees[m].leaf(x);
        if (leaf.weight1 > leaf.weight0) yes += model.alphas[m];
        total += model.alphas[m];
      }
      return total > 0.0 ? yes / total : 0.5;
    }
    case ModelKind::Knn: {
      const auto neighbours = knn_neighbours(model, x);
      std::size_t positive = 0;
      for (auto i : neighbours) positive += model.knn.labels[i];
      return static_cast<double>(positive) / static_cast<double>(neighbours.size());
    }
  }
  throw DomainError("unknown model kind");
}

std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& data,
                                  unsigned threads) {
  if (data.cols() != model.n_features()) throw DomainError("feature arity mismatch");
  std::vector<double> out(data.rows());
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (data.rows() + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(data.rows(), (c + 1) * kChunk);
    for (std::size_t r = c * kChunk; r < end; ++r) out[r] = predict_proba(model, data.row(r));
  });
  return out;
}

}  // namespace sessbot
