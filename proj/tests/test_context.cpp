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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "colqa/context.hpp"

using namespace colqa;

namespace {

Token tok(std::string text, double x1, double y1, double x2, double y2) {
  return {std::move(text), {x1, y1, x2, y2}, {}};
}

DocumentOcr doc(std::vector<Token> tokens) {
  DocumentOcr d;
  d.doc_id = "d";
  d.tokens = std::move(tokens);
  return d;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

DocumentOcr random_page(std::mt19937& rng) {
  std::uniform_real_distribution<double> x(0, 600), jitter(-3, 3);
  DocumentOcr d;
  d.doc_id = "r";
  const int lines = 1 + static_cast<int>(rng() % 6);
  for (int l = 0; l < lines; ++l) {
    const int words = 1 + static_cast<int>(rng() % 5);
    for (int w = 0; w < words; ++w) {
      const double y = 40.0 * l + jitter(rng), left = x(rng);
      d.tokens.push_back(tok("w" + std::to_string(rng() % 7), left, y, left + 30, y + 20));
    }
  }
  return d;
}

}  // namespace

TEST_CASE("two clear lines") {
  const auto d = doc({tok("C", 0, 20, 10, 30), tok("B", 20, 0, 30, 10), tok("A", 0, 0, 10, 10)});
  CHECK(serialize_context(d) == "A B C");
  CHECK(group_lines(d).size() == 2);
}

TEST_CASE("empty document") {
  CHECK(serialize_context(doc({})).empty());
  CHECK(group_lines(doc({})).empty());
}

TEST_CASE("centers 10, 14 and 40 with height 10") {
  // tolerance 0.5 * 10 = 5: the first two share a line
  const auto d = doc({tok("third", 0, 35, 30, 45), tok("right", 50, 5, 80, 15),
                      tok("left", 0, 9, 30, 19)});
  CHECK(serialize_context(d) == "left right third");
  // a tighter tolerance splits them
  CHECK(serialize_context(d, 0.3) == "right left third");
}

TEST_CASE("serialization properties") {
  std::mt19937 rng(29);
  for (int iter = 0; iter < 200; ++iter) {
    const DocumentOcr d = random_page(rng);
    const std::string base = serialize_context(d);

    auto words = split(base);
    std::vector<std::string> expected;
    for (const auto& t : d.tokens) expected.push_back(t.text);
    std::sort(words.begin(), words.end());
    std::sort(expected.begin(), expected.end());
    CHECK(words == expected);

    DocumentOcr shifted = d;
    const double dx = static_cast<double>(rng() % 500), dy = static_cast<double>(rng() % 500);
    for (auto& t : shifted.tokens) {
      t.bbox.x1 += dx;
      t.bbox.x2 += dx;
      t.bbox.y1 += dy;
      t.bbox.y2 += dy;
    }
    CHECK(serialize_context(shifted) == base);

    DocumentOcr permuted = d;
    std::shuffle(permuted.tokens.begin(), permuted.tokens.end(), rng);
    CHECK(serialize_context(permuted) == base);
  }
}
