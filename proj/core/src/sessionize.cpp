#include "sessbot/sessionize.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "sessbot/error.hpp"
#include "sessbot/parallel.hpp"

namespace sessbot {

void SessionizerConfig::validate() const {
  if (gap_threshold_seconds < 1) {
    throw ValidationError("gap threshold must be at least 1 second");
  }
}

Sessionizer::Sessionizer(SessionizerConfig config, Sink sink)
    : config_(config), sink_(std::move(sink)) {
  config_.validate();
}

void Sessionizer::push(TweetRecord tweet) {
  if (!open_.empty()) {
    const auto& last = open_.back().tweet;
    if (tweet.user_id != last.user_id) {
      flush();
      ordinal_ = 0;
    } else if (tweet.created_at < last.created_at) {
      throw DomainError("events of user " + tweet.user_id + " are not time-ordered");
    } else if (tweet.created_at - last.created_at >= config_.gap_threshold_seconds) {
      flush();
    }
  } else if (tweet.user_id != user_) {
    ordinal_ = 0;
  }
  if (open_.empty()) ++ordinal_;
  user_ = tweet.user_id;
  SessionizedTweet st;
  st.tweet = std::move(tweet);
  st.session_ordinal = ordinal_;
  st.position_in_session = static_cast<int>(open_.size()) + 1;
  open_.push_back(std::move(st));
}

void Sessionizer::finish() { flush(); }

void Sessionizer::flush() {
  if (open_.empty()) return;
  const int length = static_cast<int>(open_.size());
  for (auto& st : open_) st.session_length = length;
  sink_(open_);
  open_.clear();
}

std::vector<SessionizedTweet> sessionize_user(std::vector<TweetRecord> tweets,
                                              const SessionizerConfig& config) {
  config.validate();
  for (const auto& t : tweets) {
    if (t.user_id != tweets.front().user_id) {
      throw DomainError("sessionize_user called with more than one user_id");
    }
  }
  std::stable_sort(tweets.begin(), tweets.end(),
                   [](const TweetRecord& a, const TweetRecord& b) {
                     return a.created_at < b.created_at;
                   });
  std::vector<SessionizedTweet> out;
  out.reserve(tweets.size());
  Sessionizer sessionizer(config, [&](std::span<const SessionizedTweet> session) {
    out.insert(out.end(), session.begin(), session.end());
  });
  for (auto& t : tweets) sessionizer.push(std::move(t));
  sessionizer.finish();
  return out;
}

std::vector<SessionizedTweet> sessionize_corpus(std::vector<TweetRecord> tweets,
                                                const SessionizerConfig& config,
                                                unsigned threads) {
  config.validate();
  std::unordered_map<std::string, std::size_t> user_index;
  std::vector<std::vector<TweetRecord>> per_user;
  for (auto& t : tweets) {
    auto [it, inserted] = user_index.try_emplace(t.user_id, per_user.size());
    if (inserted) per_user.emplace_back();
    per_user[it->second].push_back(std::move(t));
  }
  tweets.clear();
  tweets.shrink_to_fit();

  std::vector<std::vector<SessionizedTweet>> results(per_user.size());
  parallel_for(per_user.size(), threads, [&](std::size_t u) {
    results[u] = sessionize_user(std::move(per_user[u]), config);
  });

  std::size_t total = 0;
  for (const auto& r : results) total += r.size();
  std::vector<SessionizedTweet> out;
  out.reserve(total);
  for (auto& r : results) {
    std::move(r.begin(), r.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<std::int64_t> intertweet_gaps(std::span<const TweetRecord> tweets) {
  std::vector<std::int64_t> gaps;
  for (std::size_t i = 1; i < tweets.size(); ++i) {
    if (tweets[i].user_id == tweets[i - 1].user_id) {
      gaps.push_back(tweets[i].created_at - tweets[i - 1].created_at);
    }
  }
  return gaps;
}

std::vector<std::int64_t> intersession_gaps(std::span<const SessionizedTweet> tweets) {
  std::vector<std::int64_t> gaps;
  for (std::size_t i = 1; i < tweets.size(); ++i) {
    const auto& prev = tweets[i - 1];
    const auto& cur = tweets[i];
    if (cur.tweet.user_id == prev.tweet.user_id && cur.session_ordinal != prev.session_ordinal) {
      gaps.push_back(cur.tweet.created_at - prev.tweet.created_at);
    }
  }
  return gaps;
}

Histogram make_histogram(std::span<const std::int64_t> values, std::int64_t bin_width,
                         std::int64_t lower, std::int64_t upper) {
  if (bin_width < 1) throw ValidationError("histogram bin width must be positive");
  if (upper <= lower) throw ValidationError("histogram range is empty");
  Histogram h;
  h.bin_width_seconds = bin_width;
  h.lower_bound = lower;
  h.counts.assign(static_cast<std::size_t>((upper - lower + bin_width - 1) / bin_width), 0);
  for (auto v : values) {
    if (v < lower || v >= upper) continue;
    ++h.counts[static_cast<std::size_t>((v - lower) / bin_width)];
  }
  return h;
}

std::vector<PeakRatio> neighbour_ratios(const Histogram& h) {
  std::vector<PeakRatio> out;
  for (std::size_t i = 1; i + 1 < h.counts.size(); ++i) {
    const double neighbours =
        0.5 * static_cast<double>(h.counts[i - 1] + h.counts[i + 1]);
    const auto count = static_cast<double>(h.counts[i]);
    double ratio = 0.0;
    if (neighbours > 0.0) {
      ratio = count / neighbours;
    } else if (count > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    out.push_back({h.bin_start(i), ratio});
  }
  return out;
}

std::map<int, double> position_frequency(std::span<const SessionizedTweet> tweets,
                                         const LabelMap& labels, std::optional<Label> filter) {
  std::map<int, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& t : tweets) {
    if (filter) {
      auto it = labels.find(t.tweet.user_id);
      if (it == labels.end() || it->second != *filter) continue;
    }
    ++counts[t.position_in_session];
    ++total;
  }
  std::map<int, double> out;
  for (auto [pos, c] : counts) {
    out[pos] = static_cast<double>(c) / static_cast<double>(total);
  }
  return out;
}

}  // namespace sessbot
