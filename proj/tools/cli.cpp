#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "sessbot/error.hpp"
#include "sessbot/eval.hpp"
#include "sessbot/features.hpp"
#include "sessbot/ingest.hpp"
#include "sessbot/io.hpp"
#include "sessbot/models.hpp"
#include "sessbot/parallel.hpp"
#include "sessbot/sessionize.hpp"
#include "sessbot/synth.hpp"
#include "sessbot/trends.hpp"

#ifndef SESSBOT_VERSION
#define SESSBOT_VERSION "0.0.0"
#endif

namespace sessbot::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDataDirEnv = "SESSBOT_DATA_DIR";

std::string default_path(const char* name) {
  const char* dir = std::getenv(kDataDirEnv);
  if (dir == nullptr || *dir == '\0') return name;
  return (fs::path(dir) / name).string();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Globals {
  unsigned threads = default_threads();
  std::uint64_t seed = 42;
  bool quiet = false;
};

// Shared state of one invocation.
struct Run {
  Globals globals;
  bool seed_given = false;
  std::vector<std::string> args;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  RunManifest manifest;

  void note(const std::string& msg) const {
    if (!globals.quiet) *err << msg << '\n';
  }
  void input(const std::string& path) { manifest.inputs.push_back(path); }
  void write(const std::string& path, std::string_view contents) {
    io::write_file_atomic(path, contents);
    manifest.outputs.push_back(path);
  }
  void finish(std::string_view config_extra = {}) {
    manifest.args = args;
    manifest.config_hash = config_hash(args, config_extra);
    manifest.seed = globals.seed;
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.version = SESSBOT_VERSION;
    write_manifests(manifest);
  }
};

std::string events_to_jsonl(const std::vector<TweetRecord>& tweets) {
  std::string s;
  for (const auto& t : tweets) {
    s += to_event_line(t);
    s += '\n';
  }
  return s;
}

std::string scores_to_jsonl(const std::vector<UserScore>& scores) {
  std::string s;
  for (const auto& u : scores) {
    s += to_score_line(u);
    s += '\n';
  }
  return s;
}

std::string roc_to_csv(const RocCurve& curve) {
  std::string s = "fpr,tpr,threshold\n";
  for (const auto& p : curve.points) {
    s += fmt(p.fpr) + ',' + fmt(p.tpr) + ',' + fmt(p.threshold) + '\n';
  }
  return s;
}

FeatureMatrix load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_feature_csv(in);
}

ModelKind parse_kind(const std::string& name) { return model_kind_from_string(name); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- synth -----------------------------------------------------------------

struct SynthOptions {
  std::string config;
  std::string out = default_path("corpus.jsonl");
  std::string scores = default_path("scores.jsonl");
  std::string labels;
};

void run_synth(Run& run, const SynthOptions& o) {
  GeneratorConfig config;
  if (!o.config.empty()) {
    run.input(o.config);
    config = generator_config_from_json(io::read_file(o.config));
  }
  if (run.seed_given || o.config.empty()) config.seed = run.globals.seed;
  run.globals.seed = config.seed;
  config.validate();

  const GeneratedCorpus corpus = generate_corpus(config, run.globals.threads);
  run.write(o.out, events_to_jsonl(corpus.tweets));
  run.write(o.scores, scores_to_jsonl(corpus.account_scores));
  if (!o.labels.empty()) run.write(o.labels, io::labels_to_csv(corpus.labels));
  run.note("synth: " + std::to_string(corpus.tweets.size()) + " tweets, " +
           std::to_string(corpus.labels.size()) + " users");
  run.finish(generator_config_to_json(config));
}

// ---- sessionize ------------------------------------------------------------

struct SessionizeOptions {
  std::string in = default_path("corpus.jsonl");
  std::string out = default_path("sessions.jsonl");
  std::int64_t gap_minutes = 60;
  std::string histogram;
  std::string hist_kind = "intersession";
  std::int64_t bin_seconds = 60;
  std::int64_t hist_min = 600;
  std::int64_t hist_max = 7200;
  std::string labels;
  std::string cls;
};

void run_sessionize(Run& run, const SessionizeOptions& o) {
  SessionizerConfig config;
  config.gap_threshold_seconds = o.gap_minutes * 60;
  config.validate();
  if (!o.histogram.empty()) {
    if (o.bin_seconds < 1) throw ValidationError("--bin-seconds must be at least 1");
    if (o.hist_min >= o.hist_max) throw ValidationError("--hist-min must be below --hist-max");
    if (!o.cls.empty() && o.labels.empty()) throw ValidationError("--class needs --labels");
  }

  run.input(o.in);
  auto sessions = sessionize_corpus(io::read_events(o.in), config, run.globals.threads);
  const std::size_t n_tweets = sessions.size();
  std::string body;
  for (const auto& t : sessions) {
    body += io::to_session_line(t);
    body += '\n';
  }
  run.write(o.out, body);

  if (!o.histogram.empty()) {
    std::vector<SessionizedTweet> selected;
    if (!o.cls.empty()) {
      run.input(o.labels);
      const auto labels = io::read_labels_csv(o.labels);
      selected = select_class(sessions, to_label_map(labels), label_from_string(o.cls));
    } else {
      selected = std::move(sessions);
    }
    std::vector<std::int64_t> gaps;
    if (o.hist_kind == "intersession") {
      gaps = intersession_gaps(selected);
    } else if (o.hist_kind == "intertweet") {
      std::vector<TweetRecord> tweets;
      tweets.reserve(selected.size());
      for (const auto& t : selected) tweets.push_back(t.tweet);
      gaps = intertweet_gaps(tweets);
    } else {
      throw ValidationError("--hist-kind must be intersession or intertweet");
    }
    const Histogram h = make_histogram(gaps, o.bin_seconds, o.hist_min, o.hist_max);
    std::string csv = "bin_start_seconds,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      csv += std::to_string(h.bin_start(i)) + ',' + std::to_string(h.counts[i]) + '\n';
    }
    run.write(o.histogram, csv);
  }
  run.note("sessionize: " + std::to_string(n_tweets) + " tweets");
  run.finish();
}

// ---- label -----------------------------------------------------------------

struct LabelOptions {
  std::string scores = default_path("scores.jsonl");
  std::string out = default_path("labels.csv");
  double bot_threshold = 0.53;
  double human_threshold = 0.4;
  std::optional<double> bot_top_fraction;
};

void run_label(Run& run, const LabelOptions& o) {
  run.input(o.scores);
  const auto scores = io::read_scores(o.scores);
  double bot_threshold = o.bot_threshold;
  if (o.bot_top_fraction) {
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& s : scores) values.push_back(s.bot_score);
    bot_threshold = quantile_threshold(values, *o.bot_top_fraction);
  }
  const auto labels = label_users(scores, bot_threshold, o.human_threshold);
  run.write(o.out, io::labels_to_csv(labels));
  const LabelCounts c = count_labels(labels);
  run.note("label: bot_threshold " + fmt(bot_threshold) + ", " + std::to_string(c.bots) +
           " bots, " + std::to_string(c.humans) + " humans, " + std::to_string(c.unlabeled) +
           " unlabeled");
  run.finish();
}

// ---- features --------------------------------------------------------------

struct FeaturesOptions {
  std::string in = default_path("sessions.jsonl");
  std::string labels = default_path("labels.csv");
  std::string out = default_path("features.csv");
  std::string set = "full";
  bool exclude_retweets = false;
};

void run_features(Run& run, const FeaturesOptions& o) {
  const FeatureSet set = feature_set_from_string(o.set);
  run.input(o.in);
  run.input(o.labels);
  const auto sessions = io::read_sessions(o.in);
  const auto labels = to_label_map(io::read_labels_csv(o.labels));
  FeatureOptions options;
  options.exclude_retweets = o.exclude_retweets;
  const FeatureMatrix m = project_matrix(build_feature_matrix(sessions, labels, options), set);
  std::ostringstream csv;
  write_feature_csv(csv, m);
  run.write(o.out, csv.str());
  run.note("features: " + std::to_string(m.rows()) + " rows x " + std::to_string(m.cols()) +
           " columns");
  run.finish();
}

// ---- trends ----------------------------------------------------------------

struct TrendsOptions {
  std::string in = default_path("sessions.jsonl");
  std::string labels = default_path("labels.csv");
  std::string out_dir = default_path("trends");
  int min_len = 20;
  int max_len = 25;
  int max_pos = 20;
  bool by_class = false;
  double slope_eps = 1e-3;
};

void run_trends(Run& run, const TrendsOptions& o) {
  if (o.max_pos < 1) throw ValidationError("--max-pos must be at least 1");
  run.input(o.in);
  const auto sessions = io::read_sessions(o.in);
  const auto filtered = filter_sessions(sessions, o.min_len, o.max_len);

  std::vector<std::pair<std::string, std::vector<SessionizedTweet>>> groups;
  if (o.by_class) {
    run.input(o.labels);
    const auto labels = to_label_map(io::read_labels_csv(o.labels));
    groups.emplace_back("human", select_class(filtered, labels, Label::Human));
    groups.emplace_back("bot", select_class(filtered, labels, Label::Bot));
  } else {
    groups.emplace_back("all", filtered);
  }

  std::string summary = "measure,class,points,slope,spearman_rho,verdict\n";
  for (const auto& [cls, tweets] : groups) {
    for (Measure m : kAllMeasures) {
      const TrendSeries s = per_position_series(tweets, m, o.max_pos);
      std::string csv = "position,mean,sem,n\n";
      for (const auto& p : s.points) {
        csv += std::to_string(p.position) + ',' + fmt(p.mean) + ',' + fmt(p.sem) + ',' +
               std::to_string(p.n) + '\n';
      }
      const std::string name = std::string(to_string(m)) + "_" + cls + ".csv";
      run.write((fs::path(o.out_dir) / name).string(), csv);
      if (!s.omitted_positions.empty()) {
        std::string msg = "trends: " + std::string(to_string(m)) + "/" + cls + " omits positions";
        for (int p : s.omitted_positions) msg += " " + std::to_string(p);
        run.note(msg);
      }
      summary += std::string(to_string(m)) + ',' + cls + ',' + std::to_string(s.points.size());
      if (s.points.size() >= 5) {
        const TrendTest t = trend_test(s, o.slope_eps);
        summary += ',' + fmt(t.slope) + ',' + fmt(t.spearman_rho) + ',' + to_string(t.verdict);
      } else {
        summary += ",,,insufficient";
      }
      summary += '\n';
    }
  }
  run.write((fs::path(o.out_dir) / "summary.csv").string(), summary);
  run.finish();
}

// ---- train / evaluate / compare --------------------------------------------

struct ModelOptions {
  std::string model = "rf";
  std::optional<int> n_estimators;
  std::optional<int> max_depth;
  std::optional<int> k;
  std::optional<double> learning_rate;

  ModelConfig config(std::uint64_t seed) const {
    ModelConfig c = ModelConfig::defaults(parse_kind(model), seed);
    if (n_estimators) c.n_estimators = *n_estimators;
    if (max_depth) c.max_depth = *max_depth;
    if (k) c.k_neighbors = *k;
    if (learning_rate) c.learning_rate = *learning_rate;
    c.validate();
    return c;
  }
};

void add_model_options(CLI::App* sub, ModelOptions& m) {
  sub->add_option("--model", m.model, "dt, et, rf, ab or knn")->capture_default_str();
  sub->add_option("--n-estimators", m.n_estimators, "Trees or boosting rounds");
  sub->add_option("--max-depth", m.max_depth, "Tree depth limit");
  sub->add_option("--k", m.k, "Neighbours for knn");
  sub->add_option("--learning-rate", m.learning_rate, "AdaBoost shrinkage");
}

struct TrainOptions {
  std::string data = default_path("features.csv");
  std::string out = default_path("model.json");
  std::string features = "full";
  ModelOptions model;
};

void run_train(Run& run, const TrainOptions& o) {
  const ModelConfig config = o.model.config(run.globals.seed);
  const FeatureSet set = feature_set_from_string(o.features);
  run.input(o.data);
  const FeatureMatrix data = project_matrix(load_features(o.data), set);
  const TrainedModel model = train(data, config, run.globals.threads);
  run.write(o.out, model_to_json(model));
  run.note(std::string("train: ") + to_string(config.kind) + " on " +
           std::to_string(data.rows()) + " rows");
  run.finish();
}

struct EvaluateOptions {
  std::string data = default_path("features.csv");
  std::string report = default_path("report.json");
  std::string roc;
  std::string features = "full";
  std::size_t folds = 10;
  bool group_by_user = false;
  ModelOptions model;
};

void run_evaluate(Run& run, const EvaluateOptions& o) {
  const ModelConfig config = o.model.config(run.globals.seed);
  const FeatureSet set = feature_set_from_string(o.features);
  run.input(o.data);
  const FeatureMatrix data = load_features(o.data);
  CvOptions cv;
  cv.folds = o.folds;
  cv.seed = run.globals.seed;
  cv.group_by_account = o.group_by_user;
  cv.threads = run.globals.threads;
  const CvReport r = cross_validate(data, config, set, cv);

  nlohmann::ordered_json doc;
  doc["model"] = to_string(r.model_kind);
  doc["features"] = to_string(r.feature_set);
  doc["folds"] = o.folds;
  doc["seed"] = run.globals.seed;
  doc["group_by_user"] = o.group_by_user;
  doc["fold_aucs"] = r.fold_aucs;
  doc["mean_auc"] = r.mean_auc;
  doc["std_auc"] = r.std_auc;
  auto& roc = doc["mean_roc"] = nlohmann::ordered_json::array();
  for (const auto& p : r.mean_roc.points) roc.push_back({p.fpr, p.tpr});
  run.write(o.report, doc.dump(2) + "\n");
  if (!o.roc.empty()) run.write(o.roc, roc_to_csv(r.mean_roc));
  run.note(std::string("evaluate: ") + to_string(r.model_kind) + "/" + to_string(r.feature_set) +
           " mean_auc " + fmt(r.mean_auc) + " +- " + fmt(r.std_auc));
  run.finish();
}

struct CompareOptions {
  std::string data = default_path("features.csv");
  std::string out = default_path("compare.csv");
  std::string models = "dt,et,rf,ab";
  std::size_t folds = 10;
  bool group_by_user = false;
  bool noise_control = false;
};

void run_compare(Run& run, const CompareOptions& o) {
  std::vector<ModelConfig> configs;
  for (const auto& name : split_list(o.models)) {
    configs.push_back(ModelConfig::defaults(parse_kind(name), run.globals.seed));
  }
  if (configs.empty()) throw ValidationError("--models is empty");
  run.input(o.data);
  FeatureMatrix data = load_features(o.data);
  if (o.noise_control) data = with_permuted_session_columns(data, run.globals.seed);
  CvOptions cv;
  cv.folds = o.folds;
  cv.seed = run.globals.seed;
  cv.group_by_account = o.group_by_user;
  cv.threads = run.globals.threads;
  const auto entries = ablation(data, configs, cv);
  std::string csv = "model,full_auc,baseline_auc,delta\n";
  for (const auto& e : entries) {
    csv += std::string(to_string(e.full.model_kind)) + ',' + fmt(e.full.mean_auc) + ',' +
           fmt(e.baseline.mean_auc) + ',' + fmt(e.delta) + '\n';
  }
  run.write(o.out, csv);
  if (!run.globals.quiet) *run.err << csv;
  run.finish();
}

// ---- sweep -----------------------------------------------------------------

struct SweepOptions {
  std::string in = default_path("sessions.jsonl");
  std::string scores = default_path("scores.jsonl");
  std::string model = default_path("model.json");
  std::string out = default_path("sweep.csv");
  double theta_min = 0.4;
  double theta_max = 1.0;
  double theta_step = 0.05;
  double decision_threshold = 0.5;
  bool exclude_retweets = false;
};

void run_sweep(Run& run, const SweepOptions& o) {
  if (!(o.theta_step > 0.0) || o.theta_min > o.theta_max) {
    throw ConfigError("theta grid needs theta-min <= theta-max and a positive step");
  }
  std::vector<double> grid;
  const auto steps = static_cast<long>(std::floor((o.theta_max - o.theta_min) / o.theta_step + 1e-9));
  for (long i = 0; i <= steps; ++i) grid.push_back(o.theta_min + static_cast<double>(i) * o.theta_step);

  run.input(o.model);
  run.input(o.in);
  run.input(o.scores);
  const TrainedModel model = model_from_json(io::read_file(o.model));
  const auto sessions = io::read_sessions(o.in);
  std::unordered_map<std::string, double> score_of;
  LabelMap labels;
  for (const auto& s : io::read_scores(o.scores)) {
    score_of[s.user_id] = s.bot_score;
    // The label column is not used by the sweep; any labeled class keeps the row.
    labels[s.user_id] = Label::Bot;
  }
  FeatureOptions options;
  options.exclude_retweets = o.exclude_retweets;
  const FeatureMatrix data = build_feature_matrix(sessions, labels, options);

  std::vector<double> group_score;
  std::unordered_set<std::string> seen;
  for (const auto& t : sessions) {
    if (!score_of.count(t.tweet.user_id)) continue;
    if (o.exclude_retweets && t.tweet.is_retweet) continue;
    if (seen.insert(t.tweet.user_id).second) group_score.push_back(score_of[t.tweet.user_id]);
  }
  std::vector<double> row_scores(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) row_scores[r] = group_score[data.groups()[r]];

  const auto points = threshold_sweep_tpr(model, data, row_scores, grid, o.decision_threshold,
                                          run.globals.threads);
  std::string csv = "theta,n_pos,tpr\n";
  for (const auto& p : points) {
    csv += fmt(p.theta) + ',' + std::to_string(p.n_positive_tweets) + ',' +
           (p.tpr ? fmt(*p.tpr) : std::string()) + '\n';
  }
  run.write(o.out, csv);
  run.finish();
}

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::Io ? kExitIo : kExitValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Run state;
  state.args = args;
  state.out = &out;
  state.err = &err;

  CLI::App app{"Session-level bot/human behaviour analysis and detection", "sessbot"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SESSBOT_VERSION);
  app.add_option("--threads,-j", state.globals.threads, "Worker threads")
      ->capture_default_str()
      ->check(CLI::Range(1u, 4096u));
  auto* seed_opt = app.add_option("--seed", state.globals.seed, "Random seed")->capture_default_str();
  app.add_flag("--quiet,-q", state.globals.quiet, "Suppress progress messages");
  app.footer(std::string("Default paths are relative to $") + kDataDirEnv + " when it is set.");

  SynthOptions synth;
  auto* s_synth = app.add_subcommand("synth", "Generate a synthetic corpus and account scores");
  s_synth->add_option("--config", synth.config, "GeneratorConfig JSON");
  s_synth->add_option("--out", synth.out, "Corpus JSONL")->capture_default_str();
  s_synth->add_option("--scores", synth.scores, "Account scores JSONL")->capture_default_str();
  s_synth->add_option("--labels", synth.labels, "Ground-truth labels CSV");

  SessionizeOptions sess;
  auto* s_sess = app.add_subcommand("sessionize", "Split timelines into activity sessions");
  s_sess->add_option("--in", sess.in, "Events JSONL")->capture_default_str();
  s_sess->add_option("--out", sess.out, "Sessions JSONL")->capture_default_str();
  s_sess->add_option("--gap-minutes", sess.gap_minutes, "Inactivity threshold")->capture_default_str();
  s_sess->add_option("--histogram", sess.histogram, "Gap histogram CSV");
  s_sess->add_option("--hist-kind", sess.hist_kind, "intersession or intertweet")->capture_default_str();
  s_sess->add_option("--bin-seconds", sess.bin_seconds, "Histogram bin width")->capture_default_str();
  s_sess->add_option("--hist-min", sess.hist_min, "Histogram lower bound (s)")->capture_default_str();
  s_sess->add_option("--hist-max", sess.hist_max, "Histogram upper bound (s)")->capture_default_str();
  s_sess->add_option("--labels", sess.labels, "Labels CSV for --class");
  s_sess->add_option("--class", sess.cls, "Restrict the histogram to bot or human");

  LabelOptions lab;
  auto* s_label = app.add_subcommand("label", "Label accounts from bot scores");
  s_label->add_option("--scores", lab.scores, "Scores JSONL")->capture_default_str();
  s_label->add_option("--out", lab.out, "Labels CSV")->capture_default_str();
  s_label->add_option("--bot-threshold", lab.bot_threshold)->capture_default_str();
  s_label->add_option("--human-threshold", lab.human_threshold)->capture_default_str();
  s_label->add_option("--bot-top-fraction", lab.bot_top_fraction,
                      "Derive the bot threshold from the top fraction of scores");

  FeaturesOptions feat;
  auto* s_feat = app.add_subcommand("features", "Build the per-tweet feature matrix");
  s_feat->add_option("--in", feat.in, "Sessions JSONL")->capture_default_str();
  s_feat->add_option("--labels", feat.labels, "Labels CSV")->capture_default_str();
  s_feat->add_option("--out", feat.out, "Feature CSV")->capture_default_str();
  s_feat->add_option("--set", feat.set, "full or baseline")->capture_default_str();
  s_feat->add_flag("--exclude-retweets", feat.exclude_retweets);

  TrendsOptions tr;
  auto* s_trends = app.add_subcommand("trends", "Per-position behaviour within sessions");
  s_trends->add_option("--in", tr.in, "Sessions JSONL")->capture_default_str();
  s_trends->add_option("--labels", tr.labels, "Labels CSV")->capture_default_str();
  s_trends->add_option("--out-dir", tr.out_dir, "Output directory")->capture_default_str();
  s_trends->add_option("--min-len", tr.min_len)->capture_default_str();
  s_trends->add_option("--max-len", tr.max_len)->capture_default_str();
  s_trends->add_option("--max-pos", tr.max_pos)->capture_default_str();
  s_trends->add_flag("--by-class", tr.by_class);
  s_trends->add_option("--slope-eps", tr.slope_eps, "Trend slope threshold")->capture_default_str();

  TrainOptions trn;
  auto* s_train = app.add_subcommand("train", "Train a classifier and save it as JSON");
  s_train->add_option("--data", trn.data, "Feature CSV")->capture_default_str();
  s_train->add_option("--out", trn.out, "Model JSON")->capture_default_str();
  s_train->add_option("--features", trn.features, "full or baseline")->capture_default_str();
  add_model_options(s_train, trn.model);

  EvaluateOptions ev;
  auto* s_eval = app.add_subcommand("evaluate", "Cross-validated ROC/AUC");
  s_eval->add_option("--data", ev.data, "Feature CSV")->capture_default_str();
  s_eval->add_option("--report", ev.report, "Report JSON")->capture_default_str();
  s_eval->add_option("--roc", ev.roc, "Mean ROC CSV");
  s_eval->add_option("--features", ev.features, "full or baseline")->capture_default_str();
  s_eval->add_option("--folds", ev.folds)->capture_default_str();
  s_eval->add_flag("--group-by-user", ev.group_by_user, "Keep each account in one fold");
  add_model_options(s_eval, ev.model);

  CompareOptions cmp;
  auto* s_cmp = app.add_subcommand("compare", "Paired full vs baseline ablation");
  s_cmp->add_option("--data", cmp.data, "Feature CSV (full)")->capture_default_str();
  s_cmp->add_option("--out", cmp.out, "Comparison CSV")->capture_default_str();
  s_cmp->add_option("--models", cmp.models, "Comma-separated model kinds")->capture_default_str();
  s_cmp->add_option("--folds", cmp.folds)->capture_default_str();
  s_cmp->add_flag("--group-by-user", cmp.group_by_user);
  s_cmp->add_flag("--noise-control", cmp.noise_control, "Permute the session columns first");

  SweepOptions sw;
  auto* s_sweep = app.add_subcommand("sweep", "TPR against the account-score threshold");
  s_sweep->add_option("--in", sw.in, "Sessions JSONL")->capture_default_str();
  s_sweep->add_option("--scores", sw.scores, "Scores JSONL")->capture_default_str();
  s_sweep->add_option("--model", sw.model, "Model JSON")->capture_default_str();
  s_sweep->add_option("--out", sw.out, "Sweep CSV")->capture_default_str();
  s_sweep->add_option("--theta-min", sw.theta_min)->capture_default_str();
  s_sweep->add_option("--theta-max", sw.theta_max)->capture_default_str();
  s_sweep->add_option("--theta-step", sw.theta_step)->capture_default_str();
  s_sweep->add_option("--decision-threshold", sw.decision_threshold)->capture_default_str();
  s_sweep->add_flag("--exclude-retweets", sw.exclude_retweets);

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--threads" || a == "-j" || a == "--seed") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (app.get_subcommand_no_throw(a) == nullptr) {
      err << "error: unknown subcommand '" << a << "'\n\n" << app.help();
      return kExitValidation;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SESSBOT_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }
  state.seed_given = seed_opt->count() > 0;

  CLI::App* sub = app.get_subcommands().front();
  state.manifest.subcommand = sub->get_name();
  try {
    if (sub == s_synth) run_synth(state, synth);
    else if (sub == s_sess) run_sessionize(state, sess);
    else if (sub == s_label) run_label(state, lab);
    else if (sub == s_feat) run_features(state, feat);
    else if (sub == s_trends) run_trends(state, tr);
    else if (sub == s_train) run_train(state, trn);
    else if (sub == s_eval) run_evaluate(state, ev);
    else if (sub == s_cmp) run_compare(state, cmp);
    else if (sub == s_sweep) run_sweep(state, sw);
  } catch (const Error& e) {
    err << state.manifest.subcommand << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << state.manifest.subcommand << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << state.manifest.subcommand << ": " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sessbot::cli
