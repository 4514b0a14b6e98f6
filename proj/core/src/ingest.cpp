#include "sessbot/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "sessbot/error.hpp"
#include "sessbot/text.hpp"

namespace sessbot {

using nlohmann::json;

namespace {

constexpr std::string_view kTrailingPunct = ".,!?:;";

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

enum class TokenClass { Plain, Mention, Hashtag, Url };

TokenClass classify(std::string_view token) {
  while (!token.empty() && kTrailingPunct.find(token.back()) != std::string_view::npos) {
    token.remove_suffix(1);
  }
  if (starts_with(token, "http://") || starts_with(token, "https://")) return TokenClass::Url;
  if (token.size() >= 2 && (token[0] == '@' || token[0] == '#')) {
    const auto rest = text::decode_utf8(token.substr(1, 4));
    if (!rest.empty() && text::is_word_char(rest.front())) {
      return token[0] == '@' ? TokenClass::Mention : TokenClass::Hashtag;
    }
  }
  return TokenClass::Plain;
}

json parse_object(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  if (!doc.is_object()) throw ParseError(0, "expected a JSON object");
  return doc;
}

const json& required(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) throw SchemaError(field);
  return *it;
}

std::string required_string(const json& doc, const char* field) {
  const auto& v = required(doc, field);
  if (!v.is_string()) throw SchemaError(field);
  return v.get<std::string>();
}

bool optional_bool(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw SchemaError(field);
  return it->get<bool>();
}

std::optional<int> optional_count(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw SchemaError(field);
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw ValidationError(std::string(field) + " must be non-negative");
  return static_cast<int>(v);
}

}  // namespace

EntityCounts extract_entities(std::string_view input) {
  EntityCounts out;
  for (const auto& token : text::split_whitespace(input)) {
    switch (classify(token)) {
      case TokenClass::Mention: ++out.n_mentions; break;
      case TokenClass::Hashtag: ++out.n_hashtags; break;
      case TokenClass::Url: ++out.n_urls; break;
      case TokenClass::Plain:
        if (!out.stripped_text.empty()) out.stripped_text.push_back(' ');
        out.stripped_text += token;
        break;
    }
  }
  out.stripped_length = static_cast<int>(text::scalar_count(out.stripped_text));
  return out;
}

TweetRecord parse_event_line(std::string_view line) {
  const json doc = parse_object(line);
  TweetRecord r;
  r.tweet_id = required_string(doc, "tweet_id");
  r.user_id = required_string(doc, "user_id");
  const auto& ts = required(doc, "created_at");
  if (!ts.is_number_integer()) throw SchemaError("created_at");
  r.created_at = ts.get<std::int64_t>();
  if (r.created_at < 0) throw ValidationError("created_at must be non-negative");

  if (auto it = doc.find("text"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError("text");
    r.text = it->get<std::string>();
  }
  r.is_retweet = optional_bool(doc, "is_retweet");
  r.is_reply = optional_bool(doc, "is_reply");

  const EntityCounts derived = extract_entities(r.text);
  r.n_mentions = optional_count(doc, "n_mentions").value_or(derived.n_mentions);
  r.n_hashtags = optional_count(doc, "n_hashtags").value_or(derived.n_hashtags);
  r.n_urls = optional_count(doc, "n_urls").value_or(derived.n_urls);
  r.stripped_length = derived.stripped_length;
  return r;
}

std::string to_event_line(const TweetRecord& r) {
  json doc = {
      {"tweet_id", r.tweet_id},     {"user_id", r.user_id},       {"created_at", r.created_at},
      {"text", r.text},             {"is_retweet", r.is_retweet}, {"is_reply", r.is_reply},
      {"n_mentions", r.n_mentions}, {"n_hashtags", r.n_hashtags}, {"n_urls", r.n_urls},
  };
  return doc.dump();
}

UserScore parse_score_line(std::string_view line) {
  const json doc = parse_object(line);
  UserScore s;
  s.user_id = required_string(doc, "user_id");
  const auto& v = required(doc, "bot_score");
  if (!v.is_number()) throw SchemaError("bot_score");
  s.bot_score = v.get<double>();
  if (!(s.bot_score >= 0.0 && s.bot_score <= 1.0)) {
    throw ValidationError("bot_score must lie in [0, 1]");
  }
  return s;
}

std::string to_score_line(const UserScore& s) {
  return json{{"user_id", s.user_id}, {"bot_score", s.bot_score}}.dump();
}

const char* to_string(Label label) noexcept {
  switch (label) {
    case Label::Bot: return "bot";
    case Label::Human: return "human";
    case Label::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label label_from_string(std::string_view name) {
  if (name == "bot") return Label::Bot;
  if (name == "human") return Label::Human;
  if (name == "unlabeled") return Label::Unlabeled;
  throw ValidationError("unknown label '" + std::string(name) + "'");
}

LabelMap to_label_map(std::span<const UserLabel> labels) {
  LabelMap map;
  map.reserve(labels.size());
  for (const auto& l : labels) map[l.user_id] = l.label;
  return map;
}

double quantile_threshold(std::span<const double> scores, double top_fraction) {
  if (scores.empty()) throw DomainError("quantile_threshold of an empty score list");
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) {
    throw DomainError("top_fraction must lie in (0, 1)");
  }
  const auto n = scores.size();
  const auto rank = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * top_fraction)));
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end(), std::greater<>());
  return sorted[rank - 1];
}

std::vector<UserLabel> label_users(std::span<const UserScore> scores, double bot_threshold,
                                   double human_threshold) {
  if (!(human_threshold >= 0.0 && bot_threshold <= 1.0 && human_threshold < bot_threshold)) {
    throw ConfigError("thresholds must satisfy 0 <= human < bot <= 1");
  }
  std::vector<UserLabel> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    Label label = Label::Unlabeled;
    if (s.bot_score >= bot_threshold) {
      label = Label::Bot;
    } else if (s.bot_score <= human_threshold) {
      label = Label::Human;
    }
    out.push_back({s.user_id, label});
  }
  return out;
}

LabelCounts count_labels(std::span<const UserLabel> labels) {
  LabelCounts c;
  for (const auto& l : labels) {
    switch (l.label) {
      case Label::Bot: ++c.bots; break;
      case Label::Human: ++c.humans; break;
      case Label::Unlabeled: ++c.unlabeled; break;
    }
  }
  return c;
}

}  // namespace sessbot
