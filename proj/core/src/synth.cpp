#include "sessbot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <json.hpp>

#include "sessbot/error.hpp"
#include "sessbot/parallel.hpp"
#include "sessbot/random.hpp"

namespace sessbot {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;

constexpr std::int64_t kSchedulePeriod = 300;
constexpr int kMaxTextLength = 280;
constexpr int kTrendHorizon = 25;
constexpr int kMaxRejections = 10000;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

int poisson(Rng& rng, double lambda) {
  if (lambda <= 0.0) return 0;
  return std::poisson_distribution<int>(lambda)(rng);
}

double normal(Rng& rng, double mu, double sigma) {
  if (sigma <= 0.0) return mu;
  return std::normal_distribution<double>(mu, sigma)(rng);
}

double lognormal(Rng& rng, double mu, double sigma) {
  if (sigma <= 0.0) return std::exp(mu);
  return std::lognormal_distribution<double>(mu, sigma)(rng);
}

std::string filler_word(Rng& rng, int length) {
  std::uniform_int_distribution<int> letter('a', 'z');
  std::string w;
  for (int i = 0; i < length; ++i) w.push_back(static_cast<char>(letter(rng)));
  return w;
}

std::string synthesize(int n_mentions, int n_hashtags, int n_urls, int stripped_length,
                       Rng& rng) {
  std::vector<std::string> filler;
  std::uniform_int_distribution<int> word_len(1, 8);
  int remaining = stripped_length;
  while (remaining > 0) {
    // Leave room for a separator plus at least one character.
    const int w = remaining <= 8 ? remaining
                                 : std::min(word_len(rng), remaining - 2);
    filler.push_back(filler_word(rng, w));
    remaining -= w;
    if (remaining > 0) --remaining;
  }
  std::vector<std::string> tokens = filler;
  std::uniform_int_distribution<int> tag_len(2, 7);
  auto insert_at_random = [&](std::string token) {
    std::uniform_int_distribution<std::size_t> at(0, tokens.size());
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at(rng)), std::move(token));
  };
  // Entity tokens may land anywhere; filler keeps its relative order.
  for (int i = 0; i < n_mentions; ++i) insert_at_random("@" + filler_word(rng, tag_len(rng)));
  for (int i = 0; i < n_hashtags; ++i) insert_at_random("#" + filler_word(rng, tag_len(rng)));
  for (int i = 0; i < n_urls; ++i) insert_at_random("http://t/" + filler_word(rng, tag_len(rng)));
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

struct UserOutput {
  std::vector<TweetRecord> tweets;
  UserLabel label;
  UserScore score;
};

std::int64_t within_session_gap(const GeneratorConfig& c, bool bot, Rng& rng) {
  const std::int64_t limit = c.gap_threshold_seconds;
  std::int64_t gap = 1;
  int attempt = 0;
  for (; attempt < kMaxRejections; ++attempt) {
    gap = std::max<std::int64_t>(1, std::llround(lognormal(rng, c.within_gap_mu,
                                                           c.within_gap_sigma)));
    if (gap < limit) break;
  }
  if (attempt == kMaxRejections) {
    gap = std::uniform_int_distribution<std::int64_t>(1, limit - 1)(rng);
  }
  if (bot && limit > kSchedulePeriod && bernoulli(rng, c.bot_spike_q)) {
    std::int64_t snapped = std::llround(static_cast<double>(gap) / kSchedulePeriod) *
                           kSchedulePeriod;
    snapped = std::max(snapped, kSchedulePeriod);
    if (snapped >= limit) snapped = ((limit - 1) / kSchedulePeriod) * kSchedulePeriod;
    gap = snapped;
  }
  return gap;
}

std::int64_t between_session_gap(const GeneratorConfig& c, bool bot, Rng& rng) {
  const std::int64_t floor = c.gap_threshold_seconds;
  const bool scheduled = bot && bernoulli(rng, c.bot_spike_q);
  const std::int64_t ceiling =
      scheduled ? std::max(floor, c.bot_schedule_max_seconds)
                : std::numeric_limits<std::int64_t>::max();
  std::int64_t gap = floor;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double x = lognormal(rng, c.gap_mu, c.gap_sigma);
    if (x > 1e15) continue;
    const std::int64_t g = std::llround(x);
    if (g >= floor && g <= ceiling) {
      gap = g;
      break;
    }
  }
  if (scheduled) {
    gap = std::llround(static_cast<double>(gap) / kSchedulePeriod) * kSchedulePeriod;
    while (gap < floor) gap += kSchedulePeriod;
  }
  return gap;
}

std::string padded_id(char prefix, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%06d", prefix, index);
  return buf;
}

UserOutput generate_user(const GeneratorConfig& c, int user_index) {
  const bool bot = user_index >= c.n_humans;
  Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(user_index)));
  UserOutput out;
  const std::string user_id =
      bot ? padded_id('b', user_index - c.n_humans) : padded_id('h', user_index);
  out.label = {user_id, bot ? Label::Bot : Label::Human};
  const double score = bot ? std::uniform_real_distribution<double>(0.53, 1.0)(rng)
                           : std::uniform_real_distribution<double>(0.0, 0.4)(rng);
  out.score = {user_id, score};

  std::int64_t t =
      c.start_epoch + std::uniform_int_distribution<std::int64_t>(0, 86399)(rng);
  std::geometric_distribution<int> extra(bot ? c.bot_session_p : c.human_session_p);
  int seq = 0;
  for (int s = 0; s < c.sessions_per_user; ++s) {
    if (s > 0) t += between_session_gap(c, bot, rng);
    const int length = 1 + extra(rng);
    for (int k = 1; k <= length; ++k) {
      if (k > 1) t += within_session_gap(c, bot, rng);
      TweetRecord r;
      r.user_id = user_id;
      r.tweet_id = user_id + "-" + std::to_string(++seq);
      r.created_at = t;
      double mu_len = 0.0, sigma_len = 0.0, lambda_m = 0.0;
      if (bot) {
        r.is_retweet = bernoulli(rng, c.bot_p_rt);
        r.is_reply = !r.is_retweet && bernoulli(rng, c.bot_p_rep);
        lambda_m = c.bot_lambda_m;
        mu_len = c.bot_mu_len;
        sigma_len = c.bot_sigma_len;
      } else {
        r.is_retweet = bernoulli(rng, human_trend(k, c.p_rt0, c.delta_rt, c.tau_rt));
        r.is_reply =
            !r.is_retweet && bernoulli(rng, human_trend(k, c.p_rep0, c.delta_rep, c.tau_rep));
        lambda_m = c.lambda_m0 + c.beta_m * k;
        mu_len = c.mu_len0 - c.gamma_len * k;
        sigma_len = c.sigma_len;
      }
      r.n_mentions = poisson(rng, lambda_m);
      r.n_hashtags = poisson(rng, c.lambda_hashtags);
      r.n_urls = poisson(rng, c.lambda_urls);
      const auto length_draw = std::llround(normal(rng, mu_len, sigma_len));
      r.stripped_length =
          static_cast<int>(std::clamp<long long>(length_draw, 0, kMaxTextLength));
      r.text = synthesize(r.n_mentions, r.n_hashtags, r.n_urls, r.stripped_length, rng);
      out.tweets.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_humans < 0 || n_bots < 0 || n_humans + n_bots < 1) {
    throw ConfigError("need at least one user and no negative user counts");
  }
  if (sessions_per_user < 1) throw ConfigError("sessions_per_user must be positive");
  for (double p : {human_session_p, bot_session_p}) {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("session length p must lie in (0, 1]");
  }
  for (double p : {p_rt0, p_rep0, bot_p_rt, bot_p_rep, bot_spike_q}) {
    if (!is_probability(p)) throw ConfigError("probabilities must lie in [0, 1]");
  }
  if (!(tau_rt > 0.0 && tau_rep > 0.0)) throw ConfigError("trend time constants must be positive");
  if (mu_len0 - gamma_len * kTrendHorizon < 0.0) {
    throw ConfigError("mu_len0 - gamma_len * 25 must be non-negative");
  }
  for (double v : {lambda_m0, bot_lambda_m, lambda_hashtags, lambda_urls, sigma_len,
                   bot_sigma_len, within_gap_sigma, gap_sigma}) {
    if (v < 0.0) throw ConfigError("rates and spreads must be non-negative");
  }
  if (lambda_m0 + beta_m < 0.0) throw ConfigError("mention rate must stay non-negative");
  if (gap_threshold_seconds < 2) throw ConfigError("gap threshold must be at least 2 seconds");
}

double human_trend(int k, double p0, double delta, double tau) {
  const double p = p0 + delta * (1.0 - std::exp(-(k - 1) / tau));
  return std::clamp(p, 0.0, 1.0);
}

std::string synthesize_text(int n_mentions, int n_hashtags, int n_urls, int stripped_length,
                            std::uint64_t seed) {
  Rng rng(seed);
  return synthesize(n_mentions, n_hashtags, n_urls, stripped_length, rng);
}

GeneratedCorpus generate_corpus(const GeneratorConfig& config, unsigned threads) {
  config.validate();
  const int users = config.n_humans + config.n_bots;
  std::vector<UserOutput> per_user(static_cast<std::size_t>(users));
  parallel_for(per_user.size(), threads, [&](std::size_t u) {
    per_user[u] = generate_user(config, static_cast<int>(u));
  });
  GeneratedCorpus corpus;
  std::size_t total = 0;
  for (const auto& u : per_user) total += u.tweets.size();
  corpus.tweets.reserve(total);
  for (auto& u : per_user) {
    std::move(u.tweets.begin(), u.tweets.end(), std::back_inserter(corpus.tweets));
    corpus.labels.push_back(std::move(u.label));
    corpus.account_scores.push_back(std::move(u.score));
  }
  return corpus;
}

#define SESSBOT_CONFIG_FIELDS(X)                                                        \
  X(n_humans) X(n_bots) X(sessions_per_user) X(human_session_p) X(bot_session_p)        \
  X(p_rt0) X(delta_rt) X(tau_rt) X(p_rep0) X(delta_rep) X(tau_rep) X(lambda_m0)         \
  X(beta_m) X(mu_len0) X(gamma_len) X(sigma_len) X(bot_p_rt) X(bot_p_rep)               \
  X(bot_lambda_m) X(bot_mu_len) X(bot_sigma_len) X(lambda_hashtags) X(lambda_urls)      \
  X(within_gap_mu) X(within_gap_sigma) X(gap_mu) X(gap_sigma) X(bot_spike_q)            \
  X(bot_schedule_max_seconds) X(gap_threshold_seconds) X(start_epoch) X(seed)

GeneratorConfig generator_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  if (!doc.is_object()) throw ConfigError("generator config must be a JSON object");
  GeneratorConfig c;
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    try {
#define SESSBOT_READ(field)                      \
  if (key == #field) {                           \
    c.field = value.get<decltype(c.field)>();    \
    known = true;                                \
  }
      SESSBOT_CONFIG_FIELDS(SESSBOT_READ)
#undef SESSBOT_READ
    } catch (const json::exception&) {
      throw ConfigError("field '" + key + "' has the wrong type");
    }
    if (!known) throw ConfigError("unknown generator config field '" + key + "'");
  }
  c.validate();
  return c;
}

std::string generator_config_to_json(const GeneratorConfig& c) {
  json doc = json::object();
#define SESSBOT_WRITE(field) doc[#field] = c.field;
  SESSBOT_CONFIG_FIELDS(SESSBOT_WRITE)
#undef SESSBOT_WRITE
  return doc.dump(2);
}

}  // namespace sessbot
