#pragma once

// Brute-force reference implementations. They share no code with the
// library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

struct SessionSlot {
  int ordinal;
  int position;
  int length;
  bool operator==(const SessionSlot&) const = default;
};

// `ts` must be sorted. Scans gaps left to right and splits on gap >= T.
inline std::vector<SessionSlot> sessionize(const std::vector<std::int64_t>& ts, std::int64_t T) {
  std::vector<int> session_of(ts.size());
  int current = 1;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0 && ts[i] - ts[i - 1] >= T) ++current;
    session_of[i] = current;
  }
  std::vector<SessionSlot> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    int pos = 0, len = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (session_of[j] != session_of[i]) continue;
      ++len;
      if (j <= i) ++pos;
    }
    out[i] = {session_of[i], pos, len};
  }
  return out;
}

// P(s+ > s-) + 0.5 P(s+ == s-) over all positive/negative pairs.
inline double pairwise_auc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline double gini_of(double a, double b) {
  const double n = a + b;
  return 1.0 - (a / n) * (a / n) - (b / n) * (b / n);
}

struct SplitChoice {
  std::size_t feature;
  double threshold;
  double decrease;
};

// Every (feature, midpoint) pair is evaluated from scratch by a full pass
// over the rows.
inline std::optional<SplitChoice> best_split(const std::vector<std::vector<double>>& X,
                                             const std::vector<std::uint8_t>& y,
                                             const std::vector<double>& w) {
  const std::size_t n = X.size();
  const std::size_t d = n ? X[0].size() : 0;
  double p0 = 0, p1 = 0;
  for (std::size_t i = 0; i < n; ++i) (y[i] ? p1 : p0) += w[i];
  const double parent = gini_of(p0, p1);
  std::optional<SplitChoice> best;
  for (std::size_t f = 0; f < d; ++f) {
    std::vector<double> vals;
    for (const auto& row : X) vals.push_back(row[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double t = vals[k] + (vals[k + 1] - vals[k]) / 2.0;
      double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (X[i][f] <= t) (y[i] ? l1 : l0) += w[i];
        else (y[i] ? r1 : r0) += w[i];
      }
      const double total = l0 + l1 + r0 + r1;
      if (l0 + l1 <= 0 || r0 + r1 <= 0) continue;
      const double dec = parent - (l0 + l1) / total * gini_of(l0, l1) -
                         (r0 + r1) / total * gini_of(r0, r1);
      if (dec <= 1e-12) continue;
      const bool take = !best || dec > best->decrease + 1e-12 ||
                        (dec >= best->decrease - 1e-12 &&
                         (f < best->feature || (f == best->feature && t < best->threshold)));
      if (take) best = SplitChoice{f, t, dec};
    }
  }
  return best;
}

// Standardizes with population statistics, then sorts all rows by
// (squared distance, index).
inline std::vector<std::size_t> knn(const std::vector<std::vector<double>>& X,
                                    const std::vector<double>& q, std::size_t k) {
  const std::size_t n = X.size(), d = q.size();
  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (const auto& r : X) mean[j] += r[j];
    mean[j] /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& r : X) var += (r[j] - mean[j]) * (r[j] - mean[j]);
    var /= static_cast<double>(n);
    scale[j] = var > 0 ? 1.0 / std::sqrt(var) : 0.0;
  }
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double a = (X[i][j] - mean[j]) * scale[j];
      const double b = (q[j] - mean[j]) * scale[j];
      s += (a - b) * (a - b);
    }
    dist.emplace_back(s, i);
  }
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
  return out;
}

struct Entities {
  int mentions = 0, hashtags = 0, urls = 0;
  std::u32string stripped;
};

// Character-at-a-time scanner over ASCII-or-UTF-32 input. Word characters
// are limited to ASCII letters, digits and '_' plus anything >= 0xC0 that
// is not whitespace, which is enough for the inputs used in the tests.
inline Entities entities(const std::u32string& s) {
  auto space = [](char32_t c) {
    return c == U' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
           c == 0x205F || c == 0x3000;
  };
  auto word = [](char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') ||
           c == U'_' || (c >= 0xC0 && c != 0xD7 && c != 0xF7 && c < 0x2000) ||
           (c >= 0x4E00 && c <= 0x9FFF);
  };
  auto trail = [](char32_t c) {
    return c == U'.' || c == U',' || c == U'!' || c == U'?' || c == U':' || c == U';';
  };
  Entities e;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && space(s[i])) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !space(s[j])) ++j;
    std::size_t core_end = j;
    while (core_end > i && trail(s[core_end - 1])) --core_end;
    const std::u32string core = s.substr(i, core_end - i);
    const std::u32string token = s.substr(i, j - i);
    auto starts = [&](const char32_t* p) { return core.rfind(p, 0) == 0; };
    if (core.size() >= 2 && core[0] == U'@' && word(core[1])) {
      ++e.mentions;
    } else if (core.size() >= 2 && core[0] == U'#' && word(core[1])) {
      ++e.hashtags;
    } else if (starts(U"http://") || starts(U"https://")) {
      ++e.urls;
    } else {
      if (!e.stripped.empty()) e.stripped += U' ';
      e.stripped += token;
    }
    i = j;
  }
  return e;
}

// P(lo <= L <= hi) for L = 1 + Geometric(p) counting failures.
inline double geometric_window(double p, int lo, int hi) {
  return std::pow(1.0 - p, lo - 1) - std::pow(1.0 - p, hi);
}

// Mean and sample standard deviation.
inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace oracle
