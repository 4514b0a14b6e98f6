#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sessbot/ingest.hpp"

namespace sessbot {

struct SessionizerConfig {
  std::int64_t gap_threshold_seconds = 3600;

  void validate() const;  // throws ValidationError if threshold < 1
};

struct SessionizedTweet {
  TweetRecord tweet;
  int session_ordinal = 0;      // 1-based, per user
  int position_in_session = 0;  // 1-based
  int session_length = 0;
};

/// Single-pass sessionizer over one time-ordered event stream.
///
/// Events are pushed in (user, created_at) order; a gap of at least the
/// threshold, or a change of user, closes the current session. Only the
/// open session is buffered.
class Sessionizer {
 public:
  using Sink = std::function<void(std::span<const SessionizedTweet>)>;

  Sessionizer(SessionizerConfig config, Sink sink);

  // Throws DomainError if `tweet` precedes the previous event of the same user.
  void push(TweetRecord tweet);
  void finish();

 private:
  void flush();

  SessionizerConfig config_;
  Sink sink_;
  std::vector<SessionizedTweet> open_;
  std::string user_;
  int ordinal_ = 0;
};

/// Sessionizes one user's timeline. Input is stable-sorted by created_at
/// first; throws DomainError if the records do not share one user_id.
std::vector<SessionizedTweet> sessionize_user(std::vector<TweetRecord> tweets,
                                              const SessionizerConfig& config);

/// Groups by user (in order of first appearance), then sessionizes each
/// user independently.
std::vector<SessionizedTweet> sessionize_corpus(std::vector<TweetRecord> tweets,
                                                const SessionizerConfig& config,
                                                unsigned threads = 1);

/// Consecutive-post gaps. Input must be grouped by user with each group
/// time-sorted; a user with k posts contributes k-1 gaps.
std::vector<std::int64_t> intertweet_gaps(std::span<const TweetRecord> tweets);

/// Gaps that close a session, i.e. between the last post of one session
/// and the first post of the next session of the same user.
std::vector<std::int64_t> intersession_gaps(std::span<const SessionizedTweet> tweets);

struct Histogram {
  std::int64_t bin_width_seconds = 60;
  std::int64_t lower_bound = 0;
  std::vector<std::uint64_t> counts;

  std::int64_t bin_start(std::size_t i) const {
    return lower_bound + static_cast<std::int64_t>(i) * bin_width_seconds;
  }
};

/// Counts values in [lower, upper) into bins of `bin_width`.
Histogram make_histogram(std::span<const std::int64_t> values, std::int64_t bin_width,
                         std::int64_t lower, std::int64_t upper);

struct PeakRatio {
  std::int64_t bin_start = 0;
  double ratio = 0.0;  // count / mean(left, right); +inf if both neighbours are empty
};

/// Ratio of each interior bin to the mean of its two neighbours.
std::vector<PeakRatio> neighbour_ratios(const Histogram& histogram);

/// Normalized frequency of each position in session. An empty `filter`
/// keeps every labeled or unlabeled user.
std::map<int, double> position_frequency(std::span<const SessionizedTweet> tweets,
                                         const LabelMap& labels,
                                         std::optional<Label> filter);

}  // namespace sessbot
