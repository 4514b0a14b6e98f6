#include <algorithm>
#include <cmath>
#include <numeric>

#include "sessbot/error.hpp"
#include "sessbot/models.hpp"
#include "sessbot/parallel.hpp"
#include "sessbot/random.hpp"
#include "tree_internal.hpp"

namespace sessbot {

namespace {

constexpr double kTieTolerance = 1e-12;

bool better(const Split& a, const std::optional<Split>& b) {
  if (!b) return true;
  if (a.impurity_decrease > b->impurity_decrease + kTieTolerance) return true;
  if (a.impurity_decrease < b->impurity_decrease - kTieTolerance) return false;
  if (a.feature != b->feature) return a.feature < b->feature;
  return a.threshold < b->threshold;
}

double gini_unchecked(double c0, double c1) {
  const double t = c0 + c1;
  if (t <= 0.0) return 0.0;
  const double p0 = c0 / t;
  const double p1 = c1 / t;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct NodeMass {
  double w0 = 0.0;
  double w1 = 0.0;
  double total() const { return w0 + w1; }
};

double split_decrease(const NodeMass& node, double parent_gini, double l0, double l1) {
  const double r0 = node.w0 - l0;
  const double r1 = node.w1 - l1;
  const double wl = l0 + l1;
  const double wr = r0 + r1;
  const double w = node.total();
  return parent_gini - (wl / w) * gini_unchecked(l0, l1) - (wr / w) * gini_unchecked(r0, r1);
}

struct FeatureResult {
  bool constant = false;
  std::optional<Split> split;
  std::optional<Split> fallback;  // lowest-threshold split without gain
};

// Among gainless splits the order is feature, then threshold.
bool earlier(const Split& a, const std::optional<Split>& b) {
  if (!b) return true;
  if (a.feature != b->feature) return a.feature < b->feature;
  return a.threshold < b->threshold;
}

struct ValueRow {
  double value;
  std::uint32_t row;
};

FeatureResult scan_midpoints(std::span<const double> column, std::span<const std::uint8_t> labels,
                             std::span<const double> weights, std::span<const std::uint32_t> rows,
                             std::size_t feature, const NodeMass& node, double parent_gini,
                             std::vector<ValueRow>& buffer) {
  buffer.clear();
  for (auto r : rows) buffer.push_back({column[r], r});
  std::sort(buffer.begin(), buffer.end(),
            [](const ValueRow& a, const ValueRow& b) { return a.value < b.value; });
  FeatureResult out;
  if (buffer.front().value == buffer.back().value) {
    out.constant = true;
    return out;
  }
  double l0 = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < buffer.size(); ++i) {
    const auto r = buffer[i].row;
    (labels[r] ? l1 : l0) += weights[r];
    if (buffer[i].value == buffer[i + 1].value) continue;
    Split s;
    s.feature = feature;
    s.threshold = buffer[i].value + (buffer[i + 1].value - buffer[i].value) / 2.0;
    s.impurity_decrease = split_decrease(node, parent_gini, l0, l1);
    if (s.impurity_decrease > kTieTolerance) {
      if (better(s, out.split)) out.split = s;
    } else if (!out.fallback) {
      out.fallback = s;
    }
  }
  return out;
}

FeatureResult scan_random(std::span<const double> column, std::span<const std::uint8_t> labels,
                          std::span<const double> weights, std::span<const std::uint32_t> rows,
                          std::size_t feature, const NodeMass& node, double parent_gini,
                          Rng& rng) {
  double lo = column[rows.front()];
  double hi = lo;
  for (auto r : rows) {
    lo = std::min(lo, column[r]);
    hi = std::max(hi, column[r]);
  }
  FeatureResult out;
  if (lo == hi) {
    out.constant = true;
    return out;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double threshold = lo + unit(rng) * (hi - lo);
  if (threshold >= hi) threshold = std::nextafter(hi, lo);
  double l0 = 0.0, l1 = 0.0;
  for (auto r : rows) {
    if (column[r] <= threshold) (labels[r] ? l1 : l0) += weights[r];
  }
  Split s;
  s.feature = feature;
  s.threshold = threshold;
  s.impurity_decrease = split_decrease(node, parent_gini, l0, l1);
  if (s.impurity_decrease > kTieTolerance) {
    out.split = s;
  } else {
    out.fallback = s;
  }
  return out;
}

NodeMass node_mass(std::span<const std::uint8_t> labels, std::span<const double> weights,
                   std::span<const std::uint32_t> rows) {
  NodeMass m;
  for (auto r : rows) (labels[r] ? m.w1 : m.w0) += weights[r];
  return m;
}

FeatureResult evaluate_feature(const detail::ColumnData& data, std::span<const double> weights,
                               std::span<const std::uint32_t> rows, std::size_t feature,
                               const NodeMass& node, double parent_gini, SplitRule rule,
                               Rng& rng, std::vector<ValueRow>& buffer) {
  const auto column = data.column(feature);
  if (rule == SplitRule::Midpoint) {
    return scan_midpoints(column, data.labels, weights, rows, feature, node, parent_gini, buffer);
  }
  return scan_random(column, data.labels, weights, rows, feature, node, parent_gini, rng);
}

std::size_t sqrt_features(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
}

}  // namespace

double gini(double count0, double count1) {
  if (count0 < 0.0 || count1 < 0.0) throw DomainError("gini of negative counts");
  if (count0 + count1 <= 0.0) throw DomainError("gini of an empty node");
  return gini_unchecked(count0, count1);
}

namespace detail {

ColumnData::ColumnData(const FeatureMatrix& m)
    : n_rows(m.rows()), n_cols(m.cols()), values(m.rows() * m.cols()),
      labels(m.labels().begin(), m.labels().end()) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) values[c * n_rows + r] = m.at(r, c);
  }
}

std::optional<Split> best_split_rows(const ColumnData& data, std::span<const double> weights,
                                     std::span<std::uint32_t> rows,
                                     std::span<const std::size_t> candidates, SplitRule rule,
                                     Rng& rng) {
  if (rows.size() < 2) return std::nullopt;
  const NodeMass node = node_mass(data.labels, weights, rows);
  if (node.total() <= 0.0) return std::nullopt;
  const double parent_gini = gini_unchecked(node.w0, node.w1);
  std::vector<ValueRow> buffer;
  buffer.reserve(rows.size());
  std::optional<Split> best;
  for (auto f : candidates) {
    if (f >= data.n_cols) throw DomainError("candidate feature out of range");
    auto res = evaluate_feature(data, weights, rows, f, node, parent_gini, rule, rng, buffer);
    if (res.split && better(*res.split, best)) best = res.split;
  }
  return best;
}

Tree grow_tree(const ColumnData& data, std::span<const double> weights, const GrowParams& params,
               Rng& rng) {
  std::vector<std::uint32_t> rows;
  rows.reserve(data.n_rows);
  for (std::uint32_t r = 0; r < data.n_rows; ++r) {
    if (weights[r] > 0.0) rows.push_back(r);
  }
  if (rows.empty()) throw DomainError("cannot grow a tree on an empty sample");

  const std::size_t per_split = params.features == FeaturesPerSplit::All
                                    ? data.n_cols
                                    : sqrt_features(data.n_cols);
  std::vector<std::size_t> feature_pool(data.n_cols);
  std::vector<ValueRow> buffer;
  buffer.reserve(rows.size());

  struct Pending {
    int node;
    std::size_t begin, end;
    int depth;
  };
  Tree tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack{{0, 0, rows.size(), 0}};

  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    std::span<std::uint32_t> node_rows(rows.data() + job.begin, job.end - job.begin);
    const NodeMass mass = node_mass(data.labels, weights, node_rows);
    {
      auto& node = tree.nodes[static_cast<std::size_t>(job.node)];
      node.weight0 = mass.w0;
      node.weight1 = mass.w1;
    }
    const bool stop = mass.w0 <= 0.0 || mass.w1 <= 0.0 ||
                      node_rows.size() < static_cast<std::size_t>(params.min_samples_split) ||
                      (params.max_depth && job.depth >= *params.max_depth);
    if (stop) continue;

    const double parent_gini = gini_unchecked(mass.w0, mass.w1);
    std::optional<Split> best, fallback;
    if (per_split >= data.n_cols) {
      for (std::size_t f = 0; f < data.n_cols; ++f) {
        auto res = evaluate_feature(data, weights, node_rows, f, mass, parent_gini, params.rule,
                                    rng, buffer);
        if (res.split && better(*res.split, best)) best = res.split;
        if (res.fallback && earlier(*res.fallback, fallback)) fallback = res.fallback;
      }
    } else {
      // Draw features without replacement; constant ones do not count
      // towards the per-split budget.
      std::iota(feature_pool.begin(), feature_pool.end(), 0);
      std::size_t remaining = feature_pool.size();
      std::size_t informative = 0;
      while (remaining > 0 && informative < per_split) {
        std::uniform_int_distribution<std::size_t> pick(0, remaining - 1);
        const std::size_t j = pick(rng);
        const std::size_t f = feature_pool[j];
        std::swap(feature_pool[j], feature_pool[remaining - 1]);
        --remaining;
        auto res = evaluate_feature(data, weights, node_rows, f, mass, parent_gini, params.rule,
                                    rng, buffer);
        if (res.constant) continue;
        ++informative;
        if (res.split && better(*res.split, best)) best = res.split;
        if (res.fallback && earlier(*res.fallback, fallback)) fallback = res.fallback;
      }
    }
    // An impure node keeps splitting even when no candidate lowers the
    // impurity (XOR at the root); every split shrinks both sides.
    if (!best) best = fallback;
    if (!best) continue;

    const auto column = data.column(best->feature);
    const double threshold = best->threshold;
    auto mid = std::partition(node_rows.begin(), node_rows.end(),
                              [&](std::uint32_t r) { return column[r] <= threshold; });
    const std::size_t split_at = job.begin + static_cast<std::size_t>(mid - node_rows.begin());

    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.feature = static_cast<int>(best->feature);
    node.threshold = threshold;
    node.left = left;
    node.right = left + 1;
    stack.push_back({left + 1, split_at, job.end, job.depth + 1});
    stack.push_back({left, job.begin, split_at, job.depth + 1});
  }
  return tree;
}

}  // namespace detail

std::optional<Split> best_split(const FeatureMatrix& data,
                                std::span<const std::size_t> candidate_features, SplitRule rule,
                                Rng& rng) {
  const std::vector<double> weights(data.rows(), 1.0);
  return best_split(data, weights, candidate_features, rule, rng);
}

std::optional<Split> best_split(const FeatureMatrix& data, std::span<const double> weights,
                                std::span<const std::size_t> candidate_features, SplitRule rule,
                                Rng& rng) {
  if (weights.size() != data.rows()) throw DomainError("one weight per row is required");
  const detail::ColumnData columns(data);
  std::vector<std::uint32_t> rows;
  for (std::uint32_t r = 0; r < data.rows(); ++r) {
    if (weights[r] > 0.0) rows.push_back(r);
  }
  return detail::best_split_rows(columns, weights, rows, candidate_features, rule, rng);
}

const TreeNode& Tree::leaf(std::span<const double> x) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    node = &nodes[static_cast<std::size_t>(x[f] <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

std::size_t Tree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    const auto& n = nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) {
      best = std::max(best, d);
    } else {
      stack.push_back({n.left, d + 1});
      stack.push_back({n.right, d + 1});
    }
  }
  return best;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

void require_trainable(const FeatureMatrix& data) {
  if (data.rows() == 0) throw DomainError("cannot train on an empty dataset");
  if (data.cols() == 0) throw DomainError("cannot train without features");
}

TrainedModel empty_model(const FeatureMatrix& data, const ModelConfig& config) {
  TrainedModel m;
  m.config = config;
  m.feature_names = data.column_names();
  return m;
}

}  // namespace

TrainedModel train_tree(const FeatureMatrix& data, const ModelConfig& config, Rng& rng) {
  config.validate();
  require_trainable(data);
  const detail::ColumnData columns(data);
  const std::vector<double> weights(data.rows(), 1.0);
  detail::GrowParams params;
  params.rule = config.kind == ModelKind::ExtraTrees ? SplitRule::RandomThreshold
                                                     : SplitRule::Midpoint;
  params.features = config.features_per_split;
  params.max_depth = config.max_depth;
  params.min_samples_split = config.min_samples_split;
  TrainedModel model = empty_model(data, config);
  model.trees.push_back(detail::grow_tree(columns, weights, params, rng));
  return model;
}

TrainedModel train_forest(const FeatureMatrix& data, const ModelConfig& config,
                          unsigned threads) {
  config.validate();
  require_trainable(data);
  const detail::ColumnData columns(data);
  detail::GrowParams params;
  params.rule = config.kind == ModelKind::ExtraTrees ? SplitRule::RandomThreshold
                                                     : SplitRule::Midpoint;
  params.features = config.features_per_split;
  params.max_depth = config.max_depth;
  params.min_samples_split = config.min_samples_split;
  const bool bootstrap = config.kind == ModelKind::RandomForest && config.bootstrap;

  TrainedModel model = empty_model(data, config);
  model.trees.resize(static_cast<std::size_t>(config.n_estimators));
  parallel_for(model.trees.size(), threads, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, i));
    std::vector<double> weights(data.rows(), bootstrap ? 0.0 : 1.0);
    if (bootstrap) {
      std::uniform_int_distribution<std::size_t> draw(0, data.rows() - 1);
      for (std::size_t j = 0; j < data.rows(); ++j) weights[draw(rng)] += 1.0;
    }
    model.trees[i] = detail::grow_tree(columns, weights, params, rng);
  });
  return model;
}

}  // namespace sessbot
