#include "sessbot/trends.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sessbot/error.hpp"

namespace sessbot {

const char* to_string(Measure m) noexcept {
  switch (m) {
    case Measure::RetweetFraction: return "retweet_fraction";
    case Measure::ReplyFraction: return "reply_fraction";
    case Measure::MentionsPerTweet: return "mentions_per_tweet";
    case Measure::TextLength: return "text_length";
  }
  return "unknown";
}

bool excludes_retweets(Measure m) noexcept { return m != Measure::RetweetFraction; }

const char* to_string(TrendVerdict v) noexcept {
  switch (v) {
    case TrendVerdict::Increasing: return "increasing";
    case TrendVerdict::Decreasing: return "decreasing";
    case TrendVerdict::Flat: return "flat";
  }
  return "flat";
}

std::vector<SessionizedTweet> filter_sessions(std::span<const SessionizedTweet> tweets,
                                              int min_len, int max_len) {
  if (min_len > max_len) throw ConfigError("min_len exceeds max_len");
  std::vector<SessionizedTweet> out;
  for (const auto& t : tweets) {
    if (t.session_length >= min_len && t.session_length <= max_len) out.push_back(t);
  }
  return out;
}

std::vector<SessionizedTweet> select_class(std::span<const SessionizedTweet> tweets,
                                           const LabelMap& labels, Label cls) {
  std::vector<SessionizedTweet> out;
  for (const auto& t : tweets) {
    auto it = labels.find(t.tweet.user_id);
    if (it != labels.end() && it->second == cls) out.push_back(t);
  }
  return out;
}

namespace {

double observe(const TweetRecord& t, Measure m) {
  switch (m) {
    case Measure::RetweetFraction: return t.is_retweet ? 1.0 : 0.0;
    case Measure::ReplyFraction: return t.is_reply ? 1.0 : 0.0;
    case Measure::MentionsPerTweet: return t.n_mentions;
    case Measure::TextLength: return t.stripped_length;
  }
  return 0.0;
}

// Welford accumulation; values are pushed in input order.
struct Accumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
};

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TrendSeries per_position_series(std::span<const SessionizedTweet> tweets, Measure measure,
                                int max_position) {
  if (max_position < 1) throw ConfigError("max_position must be at least 1");
  std::vector<Accumulator> acc(static_cast<std::size_t>(max_position));
  for (const auto& t : tweets) {
    if (t.position_in_session > max_position) continue;
    if (excludes_retweets(measure) && t.tweet.is_retweet) continue;
    acc[static_cast<std::size_t>(t.position_in_session - 1)].push(observe(t.tweet, measure));
  }
  TrendSeries series;
  series.measure = measure;
  for (int k = 1; k <= max_position; ++k) {
    const auto& a = acc[static_cast<std::size_t>(k - 1)];
    if (a.n == 0) {
      series.omitted_positions.push_back(k);
      continue;
    }
    TrendPoint p;
    p.position = k;
    p.mean = a.mean;
    p.n = a.n;
    if (a.n > 1) {
      const double sd = std::sqrt(a.m2 / static_cast<double>(a.n - 1));
      p.sem = sd / std::sqrt(static_cast<double>(a.n));
    }
    series.points.push_back(p);
  }
  return series;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman_rho needs equal-length inputs");
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

TrendTest trend_test(const TrendSeries& series, double slope_epsilon) {
  const auto& pts = series.points;
  if (pts.size() < 5) throw DomainError("trend_test needs at least 5 points");
  double w = 0.0, wx = 0.0, wy = 0.0;
  for (const auto& p : pts) {
    const auto n = static_cast<double>(p.n);
    w += n;
    wx += n * p.position;
    wy += n * p.mean;
  }
  const double mx = wx / w;
  const double my = wy / w;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    const auto n = static_cast<double>(p.n);
    sxy += n * (p.position - mx) * (p.mean - my);
    sxx += n * (p.position - mx) * (p.position - mx);
  }
  TrendTest out;
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;

  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    xs.push_back(p.position);
    ys.push_back(p.mean);
  }
  out.spearman_rho = spearman_rho(xs, ys);

  if (out.slope > slope_epsilon && out.spearman_rho > 0.5) {
    out.verdict = TrendVerdict::Increasing;
  } else if (out.slope < -slope_epsilon && out.spearman_rho < -0.5) {
    out.verdict = TrendVerdict::Decreasing;
  }
  return out;
}

}  // namespace sessbot
