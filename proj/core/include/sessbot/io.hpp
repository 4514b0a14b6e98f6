#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sessbot/ingest.hpp"
#include "sessbot/sessionize.hpp"

namespace sessbot::io {

// Calls `fn` for every non-blank line. Errors thrown by `fn` are rethrown
// with the 1-based line number prepended.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view)>& fn);

std::string read_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::vector<TweetRecord> read_events(const std::filesystem::path& path);
std::vector<UserScore> read_scores(const std::filesystem::path& path);

// Event line plus session_ordinal, position_in_session and session_length.
std::string to_session_line(const SessionizedTweet& tweet);
SessionizedTweet parse_session_line(std::string_view line);
std::vector<SessionizedTweet> read_sessions(const std::filesystem::path& path);

std::string labels_to_csv(const std::vector<UserLabel>& labels);
std::vector<UserLabel> read_labels_csv(const std::filesystem::path& path);

}  // namespace sessbot::io
