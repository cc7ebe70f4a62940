/*
 * Copyright 2026 The colqa Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Independent, deliberately naive reimplementations used as test oracles.
// ASCII inputs only.

#ifndef COLQA_TESTS_ORACLES_HPP_
#define COLQA_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Full-table edit distance.
inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

inline double nls(const std::string& a0, const std::string& b0, bool fold = true) {
  const std::string a = fold ? lower(a0) : a0;
  const std::string b = fold ? lower(b0) : b0;
  if (a.empty() && b.empty()) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) /
                   static_cast<double>(std::max(a.size(), b.size()));
}

// Calls fn(perm) for every injective map of min(K, L) rows into columns, as
// a vector<pair<row, col>>.
template <typename Fn>
void for_each_pairing(std::size_t rows, std::size_t cols, Fn fn) {
  const bool flip = rows > cols;
  const std::size_t small = flip ? cols : rows, large = flip ? rows : cols;
  std::vector<std::size_t> idx(large);
  std::iota(idx.begin(), idx.end(), 0);
  std::set<std::vector<std::size_t>> seen;
  do {
    std::vector<std::size_t> head(idx.begin(), idx.begin() + static_cast<long>(small));
    if (!seen.insert(head).second) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < small; ++k) {
      pairs.emplace_back(flip ? head[k] : k, flip ? k : head[k]);
    }
    fn(pairs);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

inline double best_assignment(const std::vector<std::vector<double>>& m) {
  double best = -1e300;
  for_each_pairing(m.size(), m[0].size(), [&](const auto& pairs) {
    double s = 0;
    for (auto [r, c] : pairs) s += m[r][c];
    best = std::max(best, s);
  });
  return best;
}

// Every thresholded ANLSL value reachable through some maximum-raw-score
// pairing (more than one only when optimal pairings tie).
inline std::vector<double> anlsl_values(const std::vector<std::string>& g,
                                        const std::vector<std::string>& p,
                                        double tau) {
  if (g.empty() && p.empty()) return {1.0};
  if (g.empty() || p.empty()) return {0.0};
  std::vector<std::vector<double>> m(g.size(), std::vector<double>(p.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) m[i][j] = nls(g[i], p[j]);
  }
  const double best = best_assignment(m);
  const double denom = static_cast<double>(std::max(g.size(), p.size()));
  std::vector<double> out;
  for_each_pairing(m.size(), m[0].size(), [&](const auto& pairs) {
    double raw = 0, kept = 0;
    for (auto [r, c] : pairs) {
      raw += m[r][c];
      if (m[r][c] >= tau) kept += m[r][c];
    }
    if (raw >= best - 1e-12) out.push_back(kept / denom);
  });
  return out;
}

inline double anlsl_literal(const std::vector<std::string>& g,
                            const std::vector<std::string>& p) {
  return anlsl_values(g, p, 0.0).front();
}

struct Ranked {
  std::string id;
  double conf;
};

// Precision at every relevant hit, averaged over |relevant|.
inline double average_precision(std::vector<Ranked> ranking,
                                const std::set<std::string>& relevant) {
  std::stable_sort(ranking.begin(), ranking.end(), [](const Ranked& a, const Ranked& b) {
    return a.conf > b.conf || (a.conf == b.conf && a.id < b.id);
  });
  double total = 0;
  for (std::size_t k = 1; k <= ranking.size(); ++k) {
    if (!relevant.count(ranking[k - 1].id)) continue;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) hits += relevant.count(ranking[i].id);
    total += static_cast<double>(hits) / static_cast<double>(k);
  }
  return total / static_cast<double>(relevant.size());
}

// Word-spotting confidence: 1 - average of each keyword's best normalized
// distance to any word.
inline double spotting_confidence(const std::vector<std::string>& keywords,
                                  const std::vector<std::string>& words) {
  if (words.empty()) return 0.0;
  double sum = 0;
  for (const auto& k : keywords) {
    double best = 1.0;
    for (const auto& w : words) best = std::min(best, 1.0 - nls(k, w));
    sum += best;
  }
  return 1.0 - sum / static_cast<double>(keywords.size());
}

// (year, month, day) from MM/DD/YYYY, M/D/YYYY, YYYY-MM-DD or
// "Month D, YYYY".
using Ymd = std::tuple<int, int, int>;

inline std::optional<Ymd> parse_date(const std::string& s) {
  int y, m, d;
  char tail;
  if (std::sscanf(s.c_str(), "%d/%d/%d%c", &m, &d, &y, &tail) == 3) return Ymd{y, m, d};
  if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) == 3) return Ymd{y, m, d};
  static const char* months[] = {"january", "february", "march",     "april",
                                 "may",     "june",     "july",      "august",
                                 "september", "october", "november", "december"};
  char name[32];
  if (std::sscanf(s.c_str(), "%31s %d, %d", name, &d, &y) == 3) {
    const std::string n = lower(name);
    for (int i = 0; i < 12; ++i) {
      if (n == months[i]) return Ymd{y, i + 1, d};
    }
  }
  return std::nullopt;
}

}  // namespace oracle

#endif  // COLQA_TESTS_ORACLES_HPP_
