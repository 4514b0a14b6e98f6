#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sessbot/ingest.hpp"
#include "sessbot/sessionize.hpp"

namespace sessbot {

enum class Measure { RetweetFraction, ReplyFraction, MentionsPerTweet, TextLength };

inline constexpr Measure kAllMeasures[] = {Measure::RetweetFraction, Measure::ReplyFraction,
                                           Measure::MentionsPerTweet, Measure::TextLength};

const char* to_string(Measure measure) noexcept;

// Retweets are excluded from every measure except RetweetFraction.
bool excludes_retweets(Measure measure) noexcept;

struct TrendPoint {
  int position = 1;
  double mean = 0.0;
  double sem = 0.0;  // sample std (n-1) / sqrt(n); 0 when n == 1
  std::size_t n = 0;
};

struct TrendSeries {
  Measure measure = Measure::RetweetFraction;
  std::optional<Label> cls;  // empty when computed over all users
  std::vector<TrendPoint> points;
  std::vector<int> omitted_positions;  // positions with no qualifying tweet
};

enum class TrendVerdict { Increasing, Decreasing, Flat };

const char* to_string(TrendVerdict verdict) noexcept;

struct TrendTest {
  double slope = 0.0;
  double spearman_rho = 0.0;
  TrendVerdict verdict = TrendVerdict::Flat;
};

/// Keeps tweets whose session length lies in [min_len, max_len].
std::vector<SessionizedTweet> filter_sessions(std::span<const SessionizedTweet> tweets,
                                              int min_len, int max_len);

/// Keeps tweets whose user carries `cls`.
std::vector<SessionizedTweet> select_class(std::span<const SessionizedTweet> tweets,
                                           const LabelMap& labels, Label cls);

/// Mean and SEM of `measure` at positions 1..max_position.
TrendSeries per_position_series(std::span<const SessionizedTweet> tweets, Measure measure,
                                int max_position = 20);

/// Weighted least-squares slope (weights n) and Spearman correlation of
/// point means against position. Increasing needs slope > slope_epsilon
/// and rho > 0.5; Decreasing is the mirror image.
TrendTest trend_test(const TrendSeries& series, double slope_epsilon);

double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace sessbot
