#include <benchmark/benchmark.h>

#include <random>

#include "sessbot/eval.hpp"
#include "sessbot/features.hpp"
#include "sessbot/ingest.hpp"
#include "sessbot/models.hpp"
#include "sessbot/sessionize.hpp"
#include "sessbot/synth.hpp"

using namespace sessbot;

namespace {

const GeneratedCorpus& corpus() {
  static const GeneratedCorpus c = [] {
    GeneratorConfig config;
    config.n_humans = 60;
    config.n_bots = 40;
    return generate_corpus(config);
  }();
  return c;
}

const FeatureMatrix& matrix() {
  static const FeatureMatrix m = build_feature_matrix(
      sessionize_corpus(corpus().tweets, {}), to_label_map(corpus().labels));
  return m;
}

void BM_ExtractEntities(benchmark::State& state) {
  const std::string text = "merci @alice pour le lien https://t.co/x #vote ce soir, vraiment!";
  for (auto _ : state) benchmark::DoNotOptimize(extract_entities(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ExtractEntities);

void BM_SessionizeCorpus(benchmark::State& state) {
  const auto& tweets = corpus().tweets;
  for (auto _ : state) benchmark::DoNotOptimize(sessionize_corpus(tweets, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tweets.size()));
}
BENCHMARK(BM_SessionizeCorpus)->Unit(benchmark::kMillisecond);

void BM_StreamingSessionizer(benchmark::State& state) {
  const auto& tweets = corpus().tweets;
  for (auto _ : state) {
    std::size_t n = 0;
    Sessionizer s({}, [&](std::span<const SessionizedTweet> session) { n += session.size(); });
    for (const auto& t : tweets) s.push(t);
    s.finish();
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tweets.size()));
}
BENCHMARK(BM_StreamingSessionizer)->Unit(benchmark::kMillisecond);

void BM_TrainTree(benchmark::State& state) {
  const auto& m = matrix();
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(train_tree(m, ModelConfig{}, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.rows()));
}
BENCHMARK(BM_TrainTree)->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
  auto config = ModelConfig::defaults(static_cast<ModelKind>(state.range(0)), 1);
  config.n_estimators = 10;
  for (auto _ : state) benchmark::DoNotOptimize(train_forest(matrix(), config));
}
BENCHMARK(BM_TrainForest)
    ->Arg(static_cast<int>(ModelKind::RandomForest))
    ->Arg(static_cast<int>(ModelKind::ExtraTrees))
    ->Unit(benchmark::kMillisecond);

void BM_TrainAdaBoost(benchmark::State& state) {
  const auto config = ModelConfig::defaults(ModelKind::AdaBoost, 1);
  for (auto _ : state) benchmark::DoNotOptimize(train_adaboost(matrix(), config));
}
BENCHMARK(BM_TrainAdaBoost)->Unit(benchmark::kMillisecond);

void BM_RocAuc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<std::uint8_t>(i % 2);
    scores[i] = u(rng) + 0.3 * labels[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(auc(roc_curve(scores, labels)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
