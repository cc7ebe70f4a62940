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

#include "colqa/errors.hpp"
#include "colqa/fixture.hpp"
#include "colqa/pipeline.hpp"
#include "collection_of.hpp"

using namespace colqa;

namespace {

const Fixture& fixture() {
  static const Fixture fx = [] {
    FixtureSpec spec;
    spec.n_docs = 200;
    spec.seed = 5;
    return generate_fixture(spec);
  }();
  return fx;
}

MetricReport score(const std::vector<Submission>& subs, const Fixture& fx) {
  return evaluate(subs, fx.gt);
}

bool same(const std::vector<Submission>& a, const std::vector<Submission>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].question_id != b[i].question_id || a[i].answers != b[i].answers) return false;
    if (a[i].ranking.size() != b[i].ranking.size()) return false;
    for (std::size_t k = 0; k < a[i].ranking.size(); ++k) {
      if (a[i].ranking[k].doc_id != b[i].ranking[k].doc_id ||
          a[i].ranking[k].confidence != b[i].ranking[k].confidence) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("records retrieval and answering are exact on a clean fixture") {
  const auto c = collection_of(fixture());
  PipelineConfig cfg;
  cfg.retriever = Retriever::kRecords;
  cfg.answerer = Answerer::kRecords;
  const auto subs = run_pipeline(c, fixture().questions, cfg);
  REQUIRE(subs.size() == fixture().questions.size());
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CHECK(subs[i].question_id == fixture().questions[i].question_id);
    CHECK(subs[i].ranking.size() == c.records.size());
  }
  const auto report = score(subs, fixture());
  CHECK(report.map_percent == 100.0);
  CHECK(report.anlsl == 1.0);
}

TEST_CASE("ground-truth ranking gives perfect MAP") {
  const auto c = collection_of(fixture());
  PipelineConfig cfg;
  cfg.retriever = Retriever::kGroundTruth;
  cfg.answerer = Answerer::kRecords;
  cfg.ground_truth = fixture().gt;
  CHECK(score(run_pipeline(c, fixture().questions, cfg), fixture()).map_percent == 100.0);

  EchoAdapter echo;
  cfg.answerer = Answerer::kAdapter;
  cfg.adapter = &echo;
  const auto subs = run_pipeline(c, fixture().questions, cfg);
  CHECK(score(subs, fixture()).map_percent == 100.0);
  for (const auto& s : subs) CHECK(s.answers == AnswerList{"CANDIDATE"});
}

TEST_CASE("text spotting with an unreachable threshold answers nothing") {
  const auto c = collection_of(fixture());
  EchoAdapter echo;
  PipelineConfig cfg;
  cfg.adapter = &echo;
  cfg.theta = 1.1;
  for (const auto& s : run_pipeline(c, fixture().questions, cfg)) {
    CHECK(s.answers.empty());
    CHECK(s.ranking.size() == c.documents.size());
  }
}

TEST_CASE("text spotting output does not depend on thread count") {
  const auto c = collection_of(fixture());
  EchoAdapter echo;
  PipelineConfig cfg;
  cfg.adapter = &echo;
  cfg.theta = 0.5;
  const auto one = run_pipeline(c, fixture().questions, cfg);
  cfg.threads = 4;
  const auto four = run_pipeline(c, fixture().questions, cfg);
  CHECK(same(one, four));
  bool any_answer = false;
  for (const auto& s : one) any_answer = any_answer || !s.answers.empty();
  CHECK(any_answer);
}

TEST_CASE("keyword overrides steer text spotting") {
  const auto c = collection_of(fixture());
  EchoAdapter echo;
  PipelineConfig cfg;
  cfg.adapter = &echo;
  const Question& q = fixture().questions.front();
  const RawRecord& target = fixture().records[17];
  std::vector<std::string> words;
  for (const auto& t : fixture().documents[17].tokens) words.push_back(text::to_lower_ascii(t.text));
  cfg.keyword_overrides[q.question_id] = {words.begin() + 2, words.end()};
  const auto subs = rank_questions(c, std::span(&q, 1), cfg);
  CHECK(subs[0].ranking[0].doc_id == target.doc_id);
  CHECK(subs[0].ranking[0].confidence == 1.0);
}

TEST_CASE("noisy answer fields lower ANLSL but not MAP") {
  Fixture noisy = fixture();
  inject_answer_noise(noisy, 0.2, 1);
  const auto c = collection_of(noisy);
  PipelineConfig cfg;
  cfg.retriever = Retriever::kRecords;
  cfg.answerer = Answerer::kRecords;
  const auto report = score(run_pipeline(c, noisy.questions, cfg), noisy);
  CHECK(report.map_percent == 100.0);
  CHECK(report.anlsl < 1.0);
}

TEST_CASE("yes/no questions with no matching record") {
  Collection c;
  c.schema = Schema::candidate_registration();
  c.raw_records = {RawRecord{"454",
                             {{"candidate_name", RawField{"Anna M. Rivers", {}, {}}},
                              {"reporting_option", RawField{"Mini", FieldKind::kCheckbox, true}}}}};
  c.records = {normalize_record(c.raw_records[0], c.schema)};
  StructuredQuery sq{"q13",
                     {{"candidate_name", ConstraintOp::kEq, {"Anna M. Rivers"}},
                      {"reporting_option", ConstraintOp::kEq, {"Full"}}},
                     std::string(kYesNoAnswer)};
  const std::vector<Question> qs = {{"q13", "Did Anna M. Rivers select full reporting?", sq}};
  const std::vector<GroundTruthEntry> gt = {{"q13", {"No"}, {"454"}}};
  PipelineConfig cfg;
  cfg.retriever = Retriever::kRecords;
  cfg.answerer = Answerer::kRecords;
  CHECK(evaluate(run_pipeline(c, qs, cfg), gt).anlsl == 1.0);
  cfg.yes_only = true;
  CHECK(evaluate(run_pipeline(c, qs, cfg), gt).anlsl == 0.0);
}

TEST_CASE("missing inputs are reported before any work") {
  Collection docs_only = collection_of(fixture());
  docs_only.records.clear();
  docs_only.raw_records.clear();
  const auto& qs = fixture().questions;
  EchoAdapter echo;

  PipelineConfig cfg;
  CHECK_THROWS_AS(check_config(docs_only, qs, cfg), ValidationError);  // no adapter
  cfg.adapter = &echo;
  CHECK_NOTHROW(check_config(docs_only, qs, cfg));

  cfg.retriever = Retriever::kRecords;
  CHECK_THROWS_AS(check_config(docs_only, qs, cfg), ValidationError);
  cfg.retriever = Retriever::kGroundTruth;
  CHECK_THROWS_AS(check_config(docs_only, qs, cfg), ValidationError);  // no gt
  cfg.ground_truth = fixture().gt;
  CHECK_NOTHROW(check_config(docs_only, qs, cfg));
  cfg.answerer = Answerer::kRecords;
  CHECK_THROWS_AS(run_pipeline(docs_only, qs, cfg), ValidationError);

  Collection records_only = collection_of(fixture());
  records_only.documents.clear();
  PipelineConfig text;
  text.adapter = &echo;
  CHECK_THROWS_AS(check_config(records_only, qs, text), ValidationError);

  std::vector<Question> text_only = {{"q1", "Who ran?", std::nullopt}};
  PipelineConfig rec;
  rec.retriever = Retriever::kRecords;
  rec.answerer = Answerer::kRecords;
  CHECK_THROWS_AS(check_config(collection_of(fixture()), text_only, rec), ValidationError);

  CHECK_THROWS_AS(parse_retriever("oracle"), ValidationError);
  CHECK(parse_answerer("records") == Answerer::kRecords);
}
