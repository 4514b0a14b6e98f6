#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sessbot/ingest.hpp"
#include "sessbot/matrix.hpp"
#include "sessbot/sessionize.hpp"

namespace sessbot {

/// Per-tweet classifier input: three session features followed by six
/// behavioural features, in this order.
struct FeatureVector {
  int session_ordinal = 1;
  int position_in_session = 1;
  int session_length = 1;
  int is_retweet = 0;
  int is_reply = 0;
  int n_mentions = 0;
  int n_hashtags = 0;
  int n_urls = 0;
  int text_length = 0;
  int label = 0;  // 0 human, 1 bot

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

enum class FeatureSet { Full, Baseline };

const char* to_string(FeatureSet set) noexcept;
FeatureSet feature_set_from_string(std::string_view name);

inline constexpr std::array<std::string_view, 9> kFeatureNames = {
    "session_ordinal", "position_in_session", "session_length",
    "is_retweet",      "is_reply",            "n_mentions",
    "n_hashtags",      "n_urls",              "text_length",
};
inline constexpr std::size_t kSessionFeatureCount = 3;

std::span<const std::string_view> feature_names(FeatureSet set);

FeatureVector featurize(const SessionizedTweet& tweet, int label);

std::vector<double> project(const FeatureVector& v, FeatureSet set);

struct FeatureOptions {
  bool exclude_retweets = false;
};

/// Builds the full 9-column matrix for every tweet of a Bot or Human user.
/// Unlabeled users are skipped. Rows are grouped by account.
FeatureMatrix build_feature_matrix(std::span<const SessionizedTweet> tweets,
                                   const LabelMap& labels,
                                   const FeatureOptions& options = {});

/// Restricts a 9-column matrix to the columns of `set`. A matrix that
/// already has exactly the requested columns is returned unchanged.
FeatureMatrix project_matrix(const FeatureMatrix& matrix, FeatureSet set);

/// CSV with a header of canonical column names and `label` last.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix);
FeatureMatrix read_feature_csv(std::istream& in);

}  // namespace sessbot
