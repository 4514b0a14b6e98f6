#include "sessbot/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sessbot/error.hpp"

namespace sessbot::io {

namespace fs = std::filesystem;

void for_each_line(const fs::path& path, const std::function<void(std::string_view)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(line);
    } catch (const ParseError& e) {
      throw ParseError(e.byte_offset(), path.string() + ":" + std::to_string(number) + ": " +
                                            e.what());
    } catch (const SchemaError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failure on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::vector<TweetRecord> read_events(const fs::path& path) {
  std::vector<TweetRecord> out;
  for_each_line(path, [&](std::string_view line) { out.push_back(parse_event_line(line)); });
  return out;
}

std::vector<UserScore> read_scores(const fs::path& path) {
  std::vector<UserScore> out;
  for_each_line(path, [&](std::string_view line) { out.push_back(parse_score_line(line)); });
  return out;
}

std::string to_session_line(const SessionizedTweet& t) {
  auto doc = nlohmann::ordered_json::parse(to_event_line(t.tweet));
  doc["session_ordinal"] = t.session_ordinal;
  doc["position_in_session"] = t.position_in_session;
  doc["session_length"] = t.session_length;
  return doc.dump();
}

SessionizedTweet parse_session_line(std::string_view line) {
  SessionizedTweet t;
  t.tweet = parse_event_line(line);
  const auto doc = nlohmann::json::parse(line);
  auto field = [&](const char* name) {
    auto it = doc.find(name);
    if (it == doc.end() || !it->is_number_integer()) throw SchemaError(name);
    const auto v = it->get<std::int64_t>();
    if (v < 1) throw ValidationError(std::string(name) + " must be at least 1");
    return static_cast<int>(v);
  };
  t.session_ordinal = field("session_ordinal");
  t.position_in_session = field("position_in_session");
  t.session_length = field("session_length");
  if (t.position_in_session > t.session_length) {
    throw ValidationError("position_in_session exceeds session_length");
  }
  return t;
}

std::vector<SessionizedTweet> read_sessions(const fs::path& path) {
  std::vector<SessionizedTweet> out;
  for_each_line(path, [&](std::string_view line) { out.push_back(parse_session_line(line)); });
  return out;
}

std::string labels_to_csv(const std::vector<UserLabel>& labels) {
  std::string out = "user_id,label\n";
  for (const auto& l : labels) {
    out += l.user_id;
    out += ',';
    out += to_string(l.label);
    out += '\n';
  }
  return out;
}

std::vector<UserLabel> read_labels_csv(const fs::path& path) {
  std::vector<UserLabel> out;
  bool header = true;
  for_each_line(path, [&](std::string_view line) {
    if (header) {
      header = false;
      if (line != "user_id,label") throw ValidationError("expected header 'user_id,label'");
      return;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) throw ValidationError("expected 'user_id,label'");
    out.push_back({std::string(line.substr(0, comma)), label_from_string(line.substr(comma + 1))});
  });
  return out;
}

}  // namespace sessbot::io
