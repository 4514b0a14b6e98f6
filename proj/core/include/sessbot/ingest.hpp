#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sessbot {

/// One timestamped post.
///
/// Entity counts are either copied from explicit input fields or derived
/// from `text` with extract_entities(). `stripped_length` is always derived
/// from `text`.
struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  std::int64_t created_at = 0;  // epoch seconds, UTC
  std::string text;
  bool is_retweet = false;
  bool is_reply = false;
  int n_mentions = 0;
  int n_hashtags = 0;
  int n_urls = 0;
  int stripped_length = 0;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct EntityCounts {
  int n_mentions = 0;
  int n_hashtags = 0;
  int n_urls = 0;
  std::string stripped_text;
  int stripped_length = 0;  // Unicode scalar values in stripped_text

  friend bool operator==(const EntityCounts&, const EntityCounts&) = default;
};

/// Token-based entity detection.
///
/// Text is split on Unicode whitespace. Trailing `.,!?:;` characters are
/// ignored when classifying a token and are dropped together with it. A
/// token is a mention if it starts with '@' followed by a word character,
/// a hashtag for '#' followed by a word character, and a url if it starts
/// with "http://" or "https://". The remaining tokens, joined by single
/// spaces, form the stripped text.
EntityCounts extract_entities(std::string_view text);

/// Parses one JSONL event. Throws ParseError (with byte offset) on
/// malformed JSON, SchemaError on a missing or mistyped field and
/// ValidationError on a negative timestamp or count.
TweetRecord parse_event_line(std::string_view line);

/// Serializes a record as a single JSON line (no trailing newline).
std::string to_event_line(const TweetRecord& record);

struct UserScore {
  std::string user_id;
  double bot_score = 0.0;
};

UserScore parse_score_line(std::string_view line);
std::string to_score_line(const UserScore& score);

enum class Label { Bot, Human, Unlabeled };

const char* to_string(Label label) noexcept;
Label label_from_string(std::string_view name);

struct UserLabel {
  std::string user_id;
  Label label = Label::Unlabeled;
};

using LabelMap = std::unordered_map<std::string, Label>;

LabelMap to_label_map(std::span<const UserLabel> labels);

/// Score of the r-th highest value with r = max(1, floor(n * top_fraction)).
/// Throws DomainError on empty input or top_fraction outside (0, 1).
double quantile_threshold(std::span<const double> scores, double top_fraction);

/// Bot iff score >= bot_threshold, Human iff score <= human_threshold.
/// Throws ConfigError unless 0 <= human_threshold < bot_threshold <= 1.
std::vector<UserLabel> label_users(std::span<const UserScore> scores,
                                   double bot_threshold, double human_threshold);

struct LabelCounts {
  std::size_t bots = 0;
  std::size_t humans = 0;
  std::size_t unlabeled = 0;
};

LabelCounts count_labels(std::span<const UserLabel> labels);

}  // namespace sessbot
