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

#include "colqa/context.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace colqa {

namespace {

// Twice the vertical center; exact for integer coordinates.
double center2(const Token& t) { return t.bbox.y1 + t.bbox.y2; }

auto order_key(const Token& t) {
  return std::tie(t.bbox.y1, t.bbox.x1, t.text, t.bbox.x2, t.bbox.y2);
}

double median_height(const std::vector<Token>& tokens) {
  std::vector<double> heights;
  heights.reserve(tokens.size());
  for (const auto& t : tokens) heights.push_back(t.bbox.height());
  std::sort(heights.begin(), heights.end());
  const std::size_t n = heights.size();
  return n % 2 ? heights[n / 2] : 0.5 * (heights[n / 2 - 1] + heights[n / 2]);
}

struct Line {
  std::vector<Token> tokens;
  double center2_sum = 0.0;
};

}  // namespace

std::vector<std::vector<Token>> group_lines(const DocumentOcr& doc,
                                            double line_tolerance_factor) {
  if (doc.tokens.empty()) return {};

  std::vector<Token> sorted = doc.tokens;
  std::sort(sorted.begin(), sorted.end(), [](const Token& a, const Token& b) {
    const double ca = center2(a), cb = center2(b);
    if (ca != cb) return ca < cb;
    return order_key(a) < order_key(b);
  });

  // Compared in doubled units, like the centers.
  const double tolerance2 = 2.0 * line_tolerance_factor * median_height(sorted);

  std::vector<Line> lines;
  for (auto& token : sorted) {
    if (!lines.empty()) {
      Line& line = lines.back();
      const auto n = static_cast<double>(line.tokens.size());
      // |c - sum/n| < tol  <=>  |n*c - sum| < n*tol, which avoids a division.
      if (std::abs(n * center2(token) - line.center2_sum) < n * tolerance2) {
        line.center2_sum += center2(token);
        line.tokens.push_back(std::move(token));
        continue;
      }
    }
    Line line;
    line.center2_sum = center2(token);
    line.tokens.push_back(std::move(token));
    lines.push_back(std::move(line));
  }

  // Mean centers compared by cross-multiplication, exact for integer boxes.
  std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return a.center2_sum * static_cast<double>(b.tokens.size()) <
           b.center2_sum * static_cast<double>(a.tokens.size());
  });

  std::vector<std::vector<Token>> out;
  out.reserve(lines.size());
  for (auto& line : lines) {
    std::sort(line.tokens.begin(), line.tokens.end(),
              [](const Token& a, const Token& b) {
                return std::tie(a.bbox.x1, a.bbox.y1, a.text, a.bbox.x2,
                                a.bbox.y2) < std::tie(b.bbox.x1, b.bbox.y1,
                                                      b.text, b.bbox.x2,
                                                      b.bbox.y2);
              });
    out.push_back(std::move(line.tokens));
  }
  return out;
}

std::string serialize_context(const DocumentOcr& doc,
                              double line_tolerance_factor) {
  std::string out;
  for (const auto& line : group_lines(doc, line_tolerance_factor)) {
    for (const auto& token : line) {
      if (!out.empty()) out.push_back(' ');
      out += token.text;
    }
  }
  return out;
}

}  // namespace colqa
