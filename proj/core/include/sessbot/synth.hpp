#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sessbot/ingest.hpp"

namespace sessbot {

/// Parameters of the synthetic bot/human timeline generator.
///
/// Humans follow saturating per-position trends (retweet and reply
/// propensity rise, mentions rise linearly, text length falls linearly);
/// bots hold the human position-1 values flat. Session lengths are
/// 1 + Geometric(p), with a smaller p for bots.
struct GeneratorConfig {
  int n_humans = 100;
  int n_bots = 60;
  int sessions_per_user = 12;
  double human_session_p = 0.05;
  double bot_session_p = 0.03;

  double p_rt0 = 0.45, delta_rt = 0.25, tau_rt = 3.0;
  double p_rep0 = 0.05, delta_rep = 0.10, tau_rep = 3.0;
  double lambda_m0 = 0.5, beta_m = 0.03;
  double mu_len0 = 80.0, gamma_len = 1.5, sigma_len = 15.0;

  double bot_p_rt = 0.45;
  double bot_p_rep = 0.05;
  double bot_lambda_m = 0.53;
  double bot_mu_len = 78.5;
  double bot_sigma_len = 15.0;

  // Shared by both classes.
  double lambda_hashtags = 0.3;
  double lambda_urls = 0.2;

  // Within-session gaps: log-normal, resampled until below the threshold.
  double within_gap_mu = 4.787;  // ln(120 s)
  double within_gap_sigma = 1.0;
  // Between-session gaps: log-normal, resampled until at least the threshold.
  double gap_mu = 8.882;  // ln(7200 s)
  double gap_sigma = 1.0;
  // Probability that a bot gap follows its 300 s posting schedule.
  double bot_spike_q = 0.3;
  std::int64_t bot_schedule_max_seconds = 7200;
  std::int64_t gap_threshold_seconds = 3600;

  std::int64_t start_epoch = 1491004800;  // 2017-04-01T00:00:00Z
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

GeneratorConfig generator_config_from_json(const std::string& json);
std::string generator_config_to_json(const GeneratorConfig& config);

struct GeneratedCorpus {
  std::vector<TweetRecord> tweets;  // grouped by user, strictly increasing in time
  std::vector<UserLabel> labels;
  std::vector<UserScore> account_scores;  // humans in [0, 0.4], bots in [0.53, 1]
};

/// p0 + delta * (1 - exp(-(k - 1) / tau)), clamped to [0, 1].
double human_trend(int k, double p0, double delta, double tau);

/// Deterministic in (config, config.seed); users are generated from
/// independent streams so `threads` does not affect the output.
GeneratedCorpus generate_corpus(const GeneratorConfig& config, unsigned threads = 1);

/// Text made of lowercase filler words plus the given entity tokens, such
/// that extract_entities() recovers exactly these counts and length.
std::string synthesize_text(int n_mentions, int n_hashtags, int n_urls, int stripped_length,
                            std::uint64_t seed);

}  // namespace sessbot
