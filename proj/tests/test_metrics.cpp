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
#include <stdexcept>

#include "colqa/errors.hpp"
#include "colqa/metrics.hpp"
#include "oracles.hpp"

using namespace colqa;

namespace {

using Strings = std::vector<std::string>;

std::string random_word(std::mt19937& rng, std::size_t max_len) {
  static const std::string alphabet = "abcdeAB1 ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

Strings random_list(std::mt19937& rng, std::size_t max_items, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> n(0, max_items);
  Strings out(n(rng));
  for (auto& s : out) s = random_word(rng, max_len);
  return out;
}

double anlsl_of(const Strings& g, const Strings& p, double tau = 0.5) {
  AnlslOptions o;
  o.tau = tau;
  return anlsl(g, p, o);
}

bool member(double v, const std::vector<double>& values) {
  return std::any_of(values.begin(), values.end(),
                     [&](double x) { return std::abs(x - v) <= 1e-9; });
}

}  // namespace

TEST_CASE("anlsl hand cases") {
  CHECK(anlsl_of({"2016", "2020"}, {"2016", "2020"}) == 1.0);
  CHECK(anlsl_of({"2016", "2020"}, {"2020"}) == 0.5);
  CHECK(anlsl_of({"2016", "2020"}, {"2016", "2020", "1999"}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(anlsl_of({}, {}) == 1.0);
  CHECK(anlsl_of({"a"}, {}) == 0.0);
  CHECK(anlsl_of({}, {"a"}) == 0.0);
  CHECK(anlsl_of({"Republican"}, {"republlican"}) == doctest::Approx(10.0 / 11.0));
}

TEST_CASE("tau applies after matching") {
  // nls("abcd","abxy") = 0.5, nls("abcd","wxyz") = 0
  CHECK(anlsl_of({"abcd"}, {"abxy"}, 0.5) == 0.5);
  CHECK(anlsl_of({"abcd"}, {"abxx"}, 0.6) == 0.0);
  CHECK(anlsl_of({"abcd"}, {"abxx"}, 0.0) == 0.5);
  CHECK_THROWS_AS(anlsl_of({"a"}, {"a"}, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(anlsl_of({"a"}, {"a"}, -0.1), std::invalid_argument);
}

TEST_CASE("case folding switch") {
  AnlslOptions o;
  o.case_fold = false;
  const Strings upper{"YES"}, lower{"yes"};
  CHECK(anlsl(upper, lower, o) == 0.0);
  CHECK(anlsl_of({"YES"}, {"yes"}) == 1.0);
}

TEST_CASE("anlsl matches exhaustive pairing") {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Strings g = random_list(rng, 5, 6), p = random_list(rng, 5, 6);
    CHECK(anlsl_of(g, p, 0.0) == doctest::Approx(oracle::anlsl_literal(g, p)).epsilon(1e-12));
    CHECK(member(anlsl_of(g, p, 0.5), oracle::anlsl_values(g, p, 0.5)));
  }
}

TEST_CASE("anlsl properties") {
  std::mt19937 rng(9);
  for (int i = 0; i < 300; ++i) {
    Strings g = random_list(rng, 6, 8), p = random_list(rng, 6, 8);
    const double base = anlsl_of(g, p, 0.0);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);

    std::shuffle(g.begin(), g.end(), rng);
    std::shuffle(p.begin(), p.end(), rng);
    CHECK(anlsl_of(g, p, 0.0) == doctest::Approx(base).epsilon(1e-12));

    if (!g.empty()) CHECK(anlsl_of(g, g) == doctest::Approx(1.0).epsilon(1e-12));

    if (p.size() >= g.size()) {
      Strings longer = p;
      longer.push_back("####################");  // shares no character
      CHECK(anlsl_of(g, longer) <= anlsl_of(g, p) + 1e-12);
    }
  }
  CHECK(anlsl_of({"x", "x", "y"}, {"x", "x", "y"}) == 1.0);
}

TEST_CASE("average precision examples") {
  const std::vector<RankedDoc> r1 = {{"d1", 0.9}, {"d2", 0.8}, {"d3", 0.7}};
  CHECK(average_precision(r1, {"d1", "d3"}) == doctest::Approx((1.0 + 2.0 / 3.0) / 2));
  CHECK(average_precision(r1, {"d1", "d2"}) == 1.0);
  const std::vector<RankedDoc> r2 = {{"d2", 0.9}, {"d1", 0.5}};
  CHECK(average_precision(r2, {"d1", "d3"}) == 0.25);
}

TEST_CASE("average precision sorts ties by doc id") {
  const std::vector<RankedDoc> r = {{"b", 1.0}, {"a", 1.0}, {"c", 0.0}};
  CHECK(average_precision(r, {"a"}) == 1.0);
  CHECK(average_precision(r, {"b"}) == 0.5);
}

TEST_CASE("average precision errors") {
  const std::vector<RankedDoc> r = {{"a", 1.0}, {"a", 0.5}};
  CHECK_THROWS_AS(average_precision(r, {"a"}), ValidationError);
  CHECK_THROWS_AS(average_precision(std::vector<RankedDoc>{{"a", 1.0}}, {}),
                  ValidationError);
}

TEST_CASE("average precision matches definitional loop") {
  std::mt19937 rng(21);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<RankedDoc> ranking;
    std::vector<oracle::Ranked> plain;
    std::set<std::string> relevant;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "d" + std::to_string(i);
      const double conf = (rng() % 5) / 4.0;
      if (rng() % 3 == 0) relevant.insert(id);
      if (rng() % 7 == 0) continue;  // absent from the ranking
      ranking.push_back({id, conf});
      plain.push_back({id, conf});
    }
    if (relevant.empty()) relevant.insert("d0");
    std::shuffle(ranking.begin(), ranking.end(), rng);
    CHECK(average_precision(ranking, relevant) ==
          doctest::Approx(oracle::average_precision(plain, relevant)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate") {
  std::vector<GroundTruthEntry> gt = {{"q1", {"a"}, {"d1"}}, {"q2", {"b"}, {"d1", "d2"}}};
  std::vector<Submission> subs = {
      {"q1", {"a"}, {{"d1", 1.0}, {"d2", 0.0}}},
      {"q2", {"zzz"}, {{"d1", 0.0}, {"d2", 1.0}, {"d3", 0.5}}},
  };
  // q2: d2 at rank 1, d1 at rank 3 -> (1 + 2/3) / 2
  auto report = evaluate(subs, gt);
  CHECK(report.per_question.size() == 2);
  CHECK(report.per_question[0].ap == 1.0);
  CHECK(report.per_question[1].anlsl == 0.0);
  CHECK(report.map_percent == doctest::Approx(100.0 * (1.0 + (1.0 + 2.0 / 3.0) / 2) / 2));
  CHECK(report.anlsl == 0.5);

  std::vector<GroundTruthEntry> gt2 = {{"q1", {"a"}, {"d1"}}, {"q2", {"b"}, {"d1"}}};
  std::vector<Submission> subs2 = {{"q1", {"a"}, {{"d1", 1.0}}},
                                   {"q2", {"x"}, {{"d2", 1.0}, {"d1", 0.0}}}};
  auto r2 = evaluate(subs2, gt2);
  CHECK(r2.map_percent == 75.0);
  CHECK(r2.anlsl == 0.5);

  std::vector<GroundTruthEntry> one = {{"q1", {"a"}, {"d1"}}};
  std::vector<Submission> perfect = {{"q1", {"A"}, {{"d1", 1.0}}}};
  auto r3 = evaluate(perfect, one);
  CHECK(r3.map_percent == 100.0);
  CHECK(r3.anlsl == 1.0);
}

TEST_CASE("evaluate is order independent") {
  std::vector<GroundTruthEntry> gt = {
      {"q3", {"c"}, {"d2"}}, {"q1", {"a", "b"}, {"d1"}}, {"q2", {"b"}, {"d3"}}};
  std::vector<Submission> subs = {{"q2", {"b"}, {{"d3", 0.2}, {"d1", 0.9}}},
                                  {"q1", {"a"}, {{"d1", 1.0}}},
                                  {"q3", {"d"}, {{"d2", 0.1}}}};
  const auto a = evaluate(subs, gt);
  std::reverse(gt.begin(), gt.end());
  std::rotate(subs.begin(), subs.begin() + 1, subs.end());
  const auto b = evaluate(subs, gt);
  CHECK(a.map_percent == b.map_percent);
  CHECK(a.anlsl == b.anlsl);
  REQUIRE(a.per_question.size() == 3);
  CHECK(a.per_question[0].question_id == "q1");
  CHECK(b.per_question[2].question_id == "q3");
}

TEST_CASE("evaluate names offending questions") {
  std::vector<GroundTruthEntry> gt = {{"q1", {"a"}, {"d1"}}, {"q2", {"b"}, {"d1"}}};
  std::vector<Submission> subs = {{"q1", {"a"}, {{"d1", 1.0}}}};
  try {
    evaluate(subs, gt);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("q2") != std::string::npos);
  }
  subs.push_back({"q1", {"a"}, {}});
  subs.push_back({"q2", {"a"}, {}});
  try {
    evaluate(subs, gt);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("duplicate submissions for questions: q1") !=
          std::string::npos);
  }
}
