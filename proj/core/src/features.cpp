#include "sessbot/features.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "sessbot/error.hpp"

namespace sessbot {

const char* to_string(FeatureSet set) noexcept {
  return set == FeatureSet::Full ? "full" : "baseline";
}

FeatureSet feature_set_from_string(std::string_view name) {
  if (name == "full") return FeatureSet::Full;
  if (name == "baseline") return FeatureSet::Baseline;
  throw ValidationError("unknown feature set '" + std::string(name) + "'");
}

std::span<const std::string_view> feature_names(FeatureSet set) {
  std::span<const std::string_view> all(kFeatureNames);
  return set == FeatureSet::Full ? all : all.subspan(kSessionFeatureCount);
}

FeatureVector featurize(const SessionizedTweet& t, int label) {
  FeatureVector v;
  v.session_ordinal = t.session_ordinal;
  v.position_in_session = t.position_in_session;
  v.session_length = t.session_length;
  v.is_retweet = t.tweet.is_retweet ? 1 : 0;
  v.is_reply = t.tweet.is_reply ? 1 : 0;
  v.n_mentions = t.tweet.n_mentions;
  v.n_hashtags = t.tweet.n_hashtags;
  v.n_urls = t.tweet.n_urls;
  v.text_length = t.tweet.stripped_length;
  v.label = label;
  return v;
}

std::vector<double> project(const FeatureVector& v, FeatureSet set) {
  std::vector<double> out = {
      static_cast<double>(v.session_ordinal), static_cast<double>(v.position_in_session),
      static_cast<double>(v.session_length),  static_cast<double>(v.is_retweet),
      static_cast<double>(v.is_reply),        static_cast<double>(v.n_mentions),
      static_cast<double>(v.n_hashtags),      static_cast<double>(v.n_urls),
      static_cast<double>(v.text_length),
  };
  if (set == FeatureSet::Baseline) {
    out.erase(out.begin(), out.begin() + kSessionFeatureCount);
  }
  return out;
}

namespace {

std::vector<std::string> names_of(FeatureSet set) {
  std::vector<std::string> out;
  for (auto n : feature_names(set)) out.emplace_back(n);
  return out;
}

}  // namespace

FeatureMatrix build_feature_matrix(std::span<const SessionizedTweet> tweets,
                                   const LabelMap& labels, const FeatureOptions& options) {
  FeatureMatrix m(names_of(FeatureSet::Full));
  m.reserve(tweets.size());
  std::unordered_map<std::string, std::uint32_t> groups;
  for (const auto& t : tweets) {
    auto it = labels.find(t.tweet.user_id);
    if (it == labels.end() || it->second == Label::Unlabeled) continue;
    if (options.exclude_retweets && t.tweet.is_retweet) continue;
    const int label = it->second == Label::Bot ? 1 : 0;
    const auto group = groups.try_emplace(t.tweet.user_id,
                                          static_cast<std::uint32_t>(groups.size()))
                           .first->second;
    m.add_row(project(featurize(t, label), FeatureSet::Full), static_cast<std::uint8_t>(label),
              group);
  }
  return m;
}

FeatureMatrix project_matrix(const FeatureMatrix& matrix, FeatureSet set) {
  const auto wanted = feature_names(set);
  if (matrix.cols() == wanted.size()) {
    for (std::size_t c = 0; c < wanted.size(); ++c) {
      if (matrix.column_names()[c] != wanted[c]) {
        throw DomainError("unexpected column '" + matrix.column_names()[c] + "'");
      }
    }
    return matrix;
  }
  std::vector<std::size_t> columns;
  for (auto name : wanted) columns.push_back(matrix.column_index(std::string(name)));
  return matrix.select_columns(columns);
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& m) {
  if (m.has_groups()) out << "account,";
  for (const auto& name : m.column_names()) out << name << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.has_groups()) out << m.groups()[r] << ',';
    for (double v : m.row(r)) {
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out.put(',');
    }
    out << static_cast<int>(m.label(r)) << '\n';
  }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

FeatureMatrix read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("feature CSV is empty");
  auto header = split_commas(line);
  if (header.size() < 2 || header.back() != "label") {
    throw ValidationError("feature CSV header must end with 'label'");
  }
  const bool grouped = header.front() == "account";
  std::vector<std::string> names(header.begin() + (grouped ? 1 : 0), header.end() - 1);
  for (const auto& n : names) {
    bool known = false;
    for (auto k : kFeatureNames) known = known || k == n;
    if (!known) throw ValidationError("unknown feature column '" + n + "'");
  }
  FeatureMatrix m(names);
  std::vector<double> row(names.size());
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw ValidationError("line " + std::to_string(number) + ": expected " +
                            std::to_string(header.size()) + " fields");
    }
    const std::size_t offset = grouped ? 1 : 0;
    for (std::size_t c = 0; c < names.size(); ++c) {
      row[c] = parse_double(fields[c + offset]);
      if (row[c] < 0.0) throw ValidationError("negative feature value");
    }
    const double label = parse_double(fields.back());
    if (label != 0.0 && label != 1.0) throw ValidationError("label must be 0 or 1");
    if (grouped) {
      m.add_row(row, static_cast<std::uint8_t>(label),
                static_cast<std::uint32_t>(parse_double(fields.front())));
    } else {
      m.add_row(row, static_cast<std::uint8_t>(label));
    }
  }
  return m;
}

}  // namespace sessbot
