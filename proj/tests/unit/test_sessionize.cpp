#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sessbot/error.hpp"
#include "sessbot/sessionize.hpp"

using namespace sessbot;

namespace {

std::vector<TweetRecord> timeline(const std::vector<std::int64_t>& ts, const std::string& user = "u") {
  std::vector<TweetRecord> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    TweetRecord r;
    r.tweet_id = user + "-" + std::to_string(i);
    r.user_id = user;
    r.created_at = ts[i];
    out.push_back(r);
  }
  return out;
}

SessionizerConfig gap(std::int64_t t) {
  SessionizerConfig c;
  c.gap_threshold_seconds = t;
  return c;
}

std::vector<std::int64_t> random_sorted_times(std::mt19937_64& rng, std::size_t n, std::int64_t T) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<std::int64_t> small(0, T - 1), big(T, 5 * T);
  std::vector<std::int64_t> ts;
  std::int64_t t = 1000;
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: break;  // duplicate timestamp
      case 1: t += T; break;
      case 2: t += big(rng); break;
      default: t += small(rng); break;
    }
    ts.push_back(t);
  }
  return ts;
}

}  // namespace

TEST(Sessionize, SingleTweet) {
  const auto s = sessionize_user(timeline({0}), gap(3600));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].session_ordinal, 1);
  EXPECT_EQ(s[0].position_in_session, 1);
  EXPECT_EQ(s[0].session_length, 1);
}

TEST(Sessionize, BoundaryArithmetic) {
  const auto s = sessionize_user(timeline({0, 3599, 7200}), gap(3600));
  EXPECT_EQ(s[0].session_ordinal, 1);
  EXPECT_EQ(s[1].session_ordinal, 1);
  EXPECT_EQ(s[1].session_length, 2);
  EXPECT_EQ(s[2].session_ordinal, 2);
  EXPECT_EQ(s[2].session_length, 1);
  // A gap of exactly T splits.
  const auto e = sessionize_user(timeline({0, 3600}), gap(3600));
  EXPECT_EQ(e[1].session_ordinal, 2);
}

TEST(Sessionize, SortsStablyAndKeepsDuplicates) {
  auto tl = timeline({50, 10, 10, 20});
  const auto s = sessionize_user(tl, gap(5));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].tweet.tweet_id, "u-1");
  EXPECT_EQ(s[1].tweet.tweet_id, "u-2");
  EXPECT_EQ(s[1].position_in_session, 2);
  EXPECT_EQ(s[2].session_ordinal, 2);
  EXPECT_EQ(s[3].session_ordinal, 3);
}

TEST(Sessionize, MixedUsersRejected) {
  auto tl = timeline({0, 1});
  tl[1].user_id = "v";
  EXPECT_THROW(sessionize_user(tl, gap(10)), DomainError);
}

TEST(Sessionize, ConfigValidation) {
  EXPECT_THROW(gap(0).validate(), ValidationError);
  EXPECT_NO_THROW(gap(1).validate());
  EXPECT_THROW(sessionize_user(timeline({0}), gap(0)), ValidationError);
}

TEST(Sessionize, MatchesLinearScanOracle) {
  std::mt19937_64 rng(600);
  std::uniform_int_distribution<std::size_t> n_dist(1, 500);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ts = random_sorted_times(rng, n_dist(rng), 600);
    const auto got = sessionize_user(timeline(ts), gap(600));
    const auto want = oracle::sessionize(ts, 600);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ((oracle::SessionSlot{got[i].session_ordinal, got[i].position_in_session,
                                     got[i].session_length}),
                want[i]);
    }
  }
}

TEST(Sessionize, Invariants) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t T = 1 + static_cast<std::int64_t>(rng() % 1000);
    const auto ts = random_sorted_times(rng, 1 + rng() % 150, T);
    const auto s = sessionize_user(timeline(ts), gap(T));
    // Round trip: concatenation in ordinal order is the input sequence.
    for (std::size_t i = 0; i < s.size(); ++i) ASSERT_EQ(s[i].tweet.created_at, ts[i]);
    int sessions = 0;
    std::size_t big_gaps = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ASSERT_GE(s[i].position_in_session, 1);
      ASSERT_LE(s[i].position_in_session, s[i].session_length);
      sessions = std::max(sessions, s[i].session_ordinal);
      if (i == 0) continue;
      const auto g = ts[i] - ts[i - 1];
      if (g >= T) {
        ++big_gaps;
        ASSERT_EQ(s[i].session_ordinal, s[i - 1].session_ordinal + 1);
        ASSERT_EQ(s[i].position_in_session, 1);
      } else {
        ASSERT_EQ(s[i].session_ordinal, s[i - 1].session_ordinal);
        ASSERT_EQ(s[i].position_in_session, s[i - 1].position_in_session + 1);
      }
    }
    ASSERT_EQ(big_gaps, static_cast<std::size_t>(sessions - 1));
    // Lowering the threshold never reduces the session count.
    if (T > 1) {
      const auto lower = sessionize_user(timeline(ts), gap(T - 1));
      ASSERT_GE(lower.back().session_ordinal, s.back().session_ordinal);
    }
  }
}

TEST(Sessionize, StreamingMatchesBatch) {
  std::mt19937_64 rng(9);
  std::vector<TweetRecord> all;
  for (int u = 0; u < 5; ++u) {
    auto tl = timeline(random_sorted_times(rng, 40, 100), "user" + std::to_string(u));
    all.insert(all.end(), tl.begin(), tl.end());
  }
  std::vector<SessionizedTweet> streamed;
  std::size_t max_chunk = 0;
  Sessionizer s(gap(100), [&](std::span<const SessionizedTweet> chunk) {
    max_chunk = std::max(max_chunk, chunk.size());
    streamed.insert(streamed.end(), chunk.begin(), chunk.end());
  });
  for (const auto& t : all) s.push(t);
  s.finish();
  const auto batch = sessionize_corpus(all, gap(100), 1);
  ASSERT_EQ(streamed.size(), batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(streamed[i].tweet, batch[i].tweet);
    EXPECT_EQ(streamed[i].session_ordinal, batch[i].session_ordinal);
    EXPECT_EQ(streamed[i].position_in_session, batch[i].position_in_session);
    EXPECT_EQ(streamed[i].session_length, batch[i].session_length);
    EXPECT_LE(batch[i].session_length, static_cast<int>(max_chunk));
  }
}

TEST(Sessionize, StreamingRejectsOutOfOrderEvents) {
  Sessionizer s(gap(10), [](std::span<const SessionizedTweet>) {});
  auto tl = timeline({5, 4});
  s.push(tl[0]);
  EXPECT_THROW(s.push(tl[1]), DomainError);
}

TEST(Sessionize, CorpusIsIndependentOfThreads) {
  std::mt19937_64 rng(21);
  std::vector<TweetRecord> all;
  for (int u = 0; u < 30; ++u) {
    auto tl = timeline(random_sorted_times(rng, 60, 300), "u" + std::to_string(u));
    std::shuffle(tl.begin(), tl.end(), rng);
    all.insert(all.end(), tl.begin(), tl.end());
  }
  std::shuffle(all.begin(), all.end(), rng);
  const auto a = sessionize_corpus(all, gap(300), 1);
  const auto b = sessionize_corpus(all, gap(300), 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].tweet, b[i].tweet);
    ASSERT_EQ(a[i].session_ordinal, b[i].session_ordinal);
  }
}

TEST(Gaps, IntertweetGaps) {
  EXPECT_EQ(intertweet_gaps(timeline({0, 10, 30})), (std::vector<std::int64_t>{10, 20}));
  auto two = timeline({5}, "a");
  auto b = timeline({7}, "b");
  two.push_back(b[0]);
  EXPECT_TRUE(intertweet_gaps(two).empty());
}

TEST(Gaps, IntersessionGaps) {
  const auto s = sessionize_user(timeline({0, 10, 500, 505, 2000}), gap(100));
  EXPECT_EQ(intersession_gaps(s), (std::vector<std::int64_t>{490, 1495}));
}

TEST(Histogram, CountsInRange) {
  const std::vector<std::int64_t> v = {0, 59, 60, 119, 120, 300, -5};
  const auto h = make_histogram(v, 60, 0, 180);
  EXPECT_EQ(h.counts, (std::vector<std::uint64_t>{2, 2, 1}));
  EXPECT_EQ(h.bin_start(2), 120);
  EXPECT_EQ(h.lower_bound, 0);
}

TEST(Histogram, NeighbourRatios) {
  Histogram h;
  h.bin_width_seconds = 60;
  h.lower_bound = 600;
  h.counts = {2, 10, 2, 0, 5, 0};
  const auto r = neighbour_ratios(h);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].bin_start, 660);
  EXPECT_DOUBLE_EQ(r[0].ratio, 5.0);
  EXPECT_DOUBLE_EQ(r[1].ratio, 2.0 / 5.0);
  EXPECT_TRUE(std::isinf(r[3].ratio));
}

TEST(PositionFrequency, UniformWithinOneSession) {
  const auto s = sessionize_user(timeline({0, 1, 2}), gap(100));
  const auto f = position_frequency(s, {}, std::nullopt);
  ASSERT_EQ(f.size(), 3u);
  for (const auto& [pos, frac] : f) EXPECT_DOUBLE_EQ(frac, 1.0 / 3.0);
}

TEST(PositionFrequency, MixedLengths) {
  const auto s = sessionize_user(timeline({0, 500, 501, 502}), gap(100));
  const auto f = position_frequency(s, {}, std::nullopt);
  EXPECT_DOUBLE_EQ(f.at(1), 0.5);
  EXPECT_DOUBLE_EQ(f.at(2), 0.25);
  EXPECT_DOUBLE_EQ(f.at(3), 0.25);
  EXPECT_TRUE(position_frequency({}, {}, std::nullopt).empty());
}

TEST(PositionFrequency, ClassFilter) {
  auto a = sessionize_user(timeline({0, 1}, "a"), gap(100));
  auto b = sessionize_user(timeline({0}, "b"), gap(100));
  a.insert(a.end(), b.begin(), b.end());
  const LabelMap labels = {{"a", Label::Bot}, {"b", Label::Human}};
  const auto bot = position_frequency(a, labels, Label::Bot);
  EXPECT_DOUBLE_EQ(bot.at(1), 0.5);
  const auto human = position_frequency(a, labels, Label::Human);
  EXPECT_EQ(human.size(), 1u);
  double total = 0;
  for (const auto& [p, f] : position_frequency(a, labels, std::nullopt)) total += f;
  EXPECT_NEAR(total, 1.0, 1e-12);
}
