#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "sessbot/error.hpp"
#include "sessbot/models.hpp"

using namespace sessbot;

namespace {

FeatureMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  FeatureMatrix m({"a", "b", "c"});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(0, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> x = {double(v(rng)), double(v(rng)), v(rng) / 7.0};
    m.add_row(x, static_cast<std::uint8_t>(x[0] + x[1] > 9 ? 1 : rng() % 2));
  }
  return m;
}

}  // namespace

TEST(ModelIo, RoundTripPreservesPredictions) {
  const auto data = random_matrix(200, 1);
  for (auto kind : {ModelKind::DecisionTree, ModelKind::ExtraTrees, ModelKind::RandomForest,
                    ModelKind::AdaBoost, ModelKind::Knn}) {
    auto c = ModelConfig::defaults(kind, 5);
    if (c.n_estimators > 8) c.n_estimators = 8;
    const auto model = train(data, c);
    const std::string doc = model_to_json(model);
    const auto back = model_from_json(doc);
    EXPECT_EQ(model_to_json(back), doc) << to_string(kind);
    EXPECT_EQ(back.feature_names, model.feature_names);
    for (std::size_t r = 0; r < data.rows(); ++r) {
      ASSERT_EQ(predict_proba(back, data.row(r)), predict_proba(model, data.row(r)));
    }
  }
}

TEST(ModelIo, DocumentShape) {
  auto c = ModelConfig::defaults(ModelKind::AdaBoost, 1);
  c.n_estimators = 3;
  const auto doc = nlohmann::json::parse(model_to_json(train(random_matrix(50, 2), c)));
  EXPECT_EQ(doc.at("format"), "sessbot-model");
  EXPECT_EQ(doc.at("version"), 1);
  EXPECT_EQ(doc.at("kind"), "ab");
  EXPECT_TRUE(doc.at("trees").is_array());
  EXPECT_EQ(doc.at("alphas").size(), doc.at("trees").size());
}

TEST(ModelIo, RejectsBadDocuments) {
  EXPECT_THROW(model_from_json("{"), ParseError);
  EXPECT_THROW(model_from_json(R"({"format":"other","version":1})"), ValidationError);
  EXPECT_THROW(model_from_json(R"({"format":"sessbot-model","version":99})"), ValidationError);
  EXPECT_THROW(model_from_json(R"({"format":"sessbot-model","version":1,"kind":"dt"})"),
               ValidationError);

  auto c = ModelConfig::defaults(ModelKind::DecisionTree, 1);
  auto doc = nlohmann::json::parse(model_to_json(train(random_matrix(60, 3), c)));
  auto broken = doc;
  broken["trees"][0]["left"][0] = 12345;
  EXPECT_THROW(model_from_json(broken.dump()), ValidationError);
  broken = doc;
  broken["trees"] = nlohmann::json::array();
  EXPECT_THROW(model_from_json(broken.dump()), ValidationError);
}
