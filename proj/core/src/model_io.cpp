#include <json.hpp>

#include "sessbot/error.hpp"
#include "sessbot/models.hpp"

namespace sessbot {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "sessbot-model";
constexpr int kVersion = 1;

json tree_to_json(const Tree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), w0 = json::array(), w1 = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    w0.push_back(n.weight0);
    w1.push_back(n.weight1);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"weight0", w0},          {"weight1", w1}};
}

Tree tree_from_json(const json& j) {
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  Tree t;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node.feature = feature.at(i).get<int>();
    node.threshold = j.at("threshold").at(i).get<double>();
    node.left = j.at("left").at(i).get<int>();
    node.right = j.at("right").at(i).get<int>();
    node.weight0 = j.at("weight0").at(i).get<double>();
    node.weight1 = j.at("weight1").at(i).get<double>();
    if (!node.is_leaf()) {
      // Children follow their parent, which also rules out cycles.
      const auto valid = [n, i](int c) {
        return c > static_cast<int>(i) && static_cast<std::size_t>(c) < n;
      };
      if (!valid(node.left) || !valid(node.right)) {
        throw ValidationError("tree node " + std::to_string(i) + " has an invalid child index");
      }
    }
  }
  if (n == 0) throw ValidationError("tree without nodes");
  return t;
}

}  // namespace

std::string model_to_json(const TrainedModel& m) {
  const auto& c = m.config;
  json config = {
      {"n_estimators", c.n_estimators},
      {"max_depth", c.max_depth ? json(*c.max_depth) : json(nullptr)},
      {"min_samples_split", c.min_samples_split},
      {"features_per_split", c.features_per_split == FeaturesPerSplit::All ? "all" : "sqrt"},
      {"bootstrap", c.bootstrap},
      {"learning_rate", c.learning_rate},
      {"k_neighbors", c.k_neighbors},
      {"seed", c.seed},
  };
  json trees = json::array();
  for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
  json doc = {
      {"format", kFormat},         {"version", kVersion}, {"kind", to_string(c.kind)},
      {"config", config},          {"feature_names", m.feature_names},
      {"trees", trees},            {"alphas", m.alphas},
  };
  if (c.kind == ModelKind::Knn) {
    doc["knn"] = {{"means", m.knn.means},
                  {"scales", m.knn.scales},
                  {"points", m.knn.points},
                  {"labels", m.knn.labels}};
  }
  return doc.dump();
}

TrainedModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw ValidationError("not a sessbot model document");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw ValidationError("unsupported model version");
    }
    TrainedModel m;
    auto& c = m.config;
    c.kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const auto& cj = doc.at("config");
    c.n_estimators = cj.at("n_estimators").get<int>();
    if (!cj.at("max_depth").is_null()) c.max_depth = cj.at("max_depth").get<int>();
    c.min_samples_split = cj.at("min_samples_split").get<int>();
    c.features_per_split =
        cj.at("features_per_split").get<std::string>() == "sqrt" ? FeaturesPerSplit::Sqrt
                                                                  : FeaturesPerSplit::All;
    c.bootstrap = cj.at("bootstrap").get<bool>();
    c.learning_rate = cj.at("learning_rate").get<double>();
    c.k_neighbors = cj.at("k_neighbors").get<int>();
    c.seed = cj.at("seed").get<std::uint64_t>();
    c.validate();

    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& t : doc.at("trees")) {
      m.trees.push_back(tree_from_json(t));
      for (const auto& node : m.trees.back().nodes) {
        if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= m.n_features()) {
          throw ValidationError("tree node refers to an unknown feature");
        }
        if (node.is_leaf() && !(node.weight0 >= 0 && node.weight1 >= 0 &&
                                node.weight0 + node.weight1 > 0)) {
          throw ValidationError("tree leaf has no class mass");
        }
      }
    }
    m.alphas = doc.at("alphas").get<std::vector<double>>();
    if (c.kind == ModelKind::Knn) {
      const auto& k = doc.at("knn");
      m.knn.means = k.at("means").get<std::vector<double>>();
      m.knn.scales = k.at("scales").get<std::vector<double>>();
      m.knn.points = k.at("points").get<std::vector<double>>();
      m.knn.labels = k.at("labels").get<std::vector<std::uint8_t>>();
      if (m.knn.points.size() != m.knn.labels.size() * m.n_features()) {
        throw ValidationError("kNN point matrix has the wrong size");
      }
    } else if (m.trees.empty()) {
      throw ValidationError("model has no trees");
    }
    if (c.kind == ModelKind::AdaBoost && m.alphas.size() != m.trees.size()) {
      throw ValidationError("AdaBoost needs one alpha per tree");
    }
    return m;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace sessbot
