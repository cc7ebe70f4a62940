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

#include "colqa/errors.hpp"
#include "colqa/fixture.hpp"
#include "colqa/records.hpp"
#include "decision_table.hpp"

using namespace colqa;
using std::chrono::year, std::chrono::month, std::chrono::day;

namespace {

const Schema& schema() {
  static const Schema s = Schema::candidate_registration();
  return s;
}

RecordDoc make(std::string id, std::map<std::string, RawField> fields) {
  return normalize_record(RawRecord{std::move(id), std::move(fields)}, schema());
}

RawField txt(std::string s) { return {std::move(s), std::nullopt, std::nullopt}; }

StructuredQuery query(std::vector<Constraint> cs, std::string answer = "candidate_name") {
  StructuredQuery q;
  q.question_id = "q";
  q.constraints = std::move(cs);
  q.answer_field = std::move(answer);
  return q;
}

}  // namespace

TEST_CASE("date parsing") {
  const Date want{year{2012}, month{6}, day{1}};
  CHECK(parse_date("06/01/2012") == want);
  CHECK(parse_date("6/1/2012") == want);
  CHECK(parse_date("2012-06-01") == want);
  CHECK(parse_date("June 1, 2012") == want);
  CHECK(parse_date("jun 1, 2012") == want);
  CHECK_FALSE(parse_date("banana"));
  CHECK_FALSE(parse_date("02/30/2012"));
  CHECK_FALSE(parse_date("13/01/2012"));
  CHECK_FALSE(parse_date("2012-6-1x"));
  CHECK(format_iso(want) == "2012-06-01");
  CHECK(format_us(want) == "06/01/2012");
  CHECK(format_long(want) == "June 1, 2012");
  CHECK(parse_date(format_long(want)) == want);
}

TEST_CASE("normalization examples") {
  CHECK(normalize_text("anna  m. RIVERS") == "Anna M. Rivers");
  CHECK(normalize_text(" o'brien ") == "O'brien");

  const auto r = make("d", {{"party", txt("Republlican")},
                            {"election_date", txt("06/01/2012")},
                            {"office", txt("state   SENATOR")}});
  CHECK(r.find("party")->normalized == "Republican");
  CHECK_FALSE(r.find("party")->off_vocabulary);
  CHECK(r.find("election_date")->date == Date{year{2012}, month{6}, day{1}});
  CHECK(r.find("election_date")->normalized == "2012-06-01");
  CHECK(r.find("office")->normalized == "State Senator");

  const auto bad = make("d", {{"election_date", txt("banana")}, {"party", txt("Xyzzy")}});
  CHECK_FALSE(bad.find("election_date")->valid);
  CHECK(bad.find("election_date")->raw == "banana");
  CHECK(bad.find("party")->off_vocabulary);
  CHECK(bad.find("party")->valid);

  CHECK_THROWS_AS(make("d", {{"shoe_size", txt("9")}}), ValidationError);
  CHECK_THROWS_AS(make("d", {{"party", RawField{"Green", FieldKind::kDate, {}}}}),
                  ValidationError);
  CHECK_THROWS_AS(make("d", {{"party", RawField{"Green", {}, true}}}), ValidationError);
}

TEST_CASE("vocabulary snapping") {
  const std::vector<std::string> vocab = {"Republican", "Democrat", "Green"};
  CHECK(snap_to_vocabulary("Democrot", vocab) == "Democrat");
  CHECK(snap_to_vocabulary("GREEN", vocab) == "Green");
  CHECK_FALSE(snap_to_vocabulary("Grey", vocab));
  CHECK(snap_to_vocabulary("Grey", vocab, 0.5) == "Green");
}

TEST_CASE("constraint decision matrix") {
  for (const auto& row : decision_table::rows()) {
    for (int s = 0; s < 4; ++s) {
      const auto rec = normalize_record(
          decision_table::record_for(row, static_cast<decision_table::State>(s)), schema());
      INFO(to_string(row.constraint.op), " / ", decision_table::kStateNames[s]);
      CHECK(eval_constraint(rec, row.constraint) == row.expected[s]);
    }
  }
}

TEST_CASE("strict missing mode") {
  QueryOptions strict;
  strict.strict_missing = true;
  for (const auto& row : decision_table::rows()) {
    const bool negative = row.constraint.op == ConstraintOp::kNeq ||
                          row.constraint.op == ConstraintOp::kNotIn;
    for (auto s : {decision_table::kMissing, decision_table::kInvalid}) {
      const auto rec = normalize_record(decision_table::record_for(row, s), schema());
      CHECK_FALSE(eval_constraint(rec, row.constraint, strict));
    }
    const auto rec = normalize_record(
        decision_table::record_for(row, decision_table::kNonMatch), schema());
    CHECK(eval_constraint(rec, row.constraint, strict) == negative);
  }
}

TEST_CASE("date between bounds") {
  const auto on = [](const char* d, bool lo_inc, bool hi_inc) {
    Constraint c{"election_date", ConstraintOp::kDateBetween, {"06/01/2012", "12/31/2012"}};
    c.lower_inclusive = lo_inc;
    c.upper_inclusive = hi_inc;
    return eval_constraint(make("d", {{"election_date", txt(d)}}), c);
  };
  CHECK(on("2012-06-01", true, true));
  CHECK(on("2012-12-31", true, true));
  CHECK_FALSE(on("2012-06-01", false, true));
  CHECK_FALSE(on("2012-12-31", true, false));
  CHECK(on("2012-08-07", false, false));
}

TEST_CASE("malformed constraints") {
  const auto r = make("d", {{"party", txt("Green")}, {"election_date", txt("2012-01-01")}});
  CHECK_THROWS_AS(eval_constraint(r, {"party", ConstraintOp::kDateBefore, {"01/01/2012"}}),
                  ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"party", ConstraintOp::kCheckedEq, {"true"}}),
                  ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"party", ConstraintOp::kEq, {"a", "b"}}), ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"party", ConstraintOp::kIn, {}}), ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"election_date", ConstraintOp::kDateBetween,
                                      {"12/31/2012", "06/01/2012"}}),
                  ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"election_date", ConstraintOp::kDateAfter, {"soon"}}),
                  ValidationError);
  CHECK_THROWS_AS(eval_constraint(r, {"reporting_option", ConstraintOp::kCheckedEq, {"maybe"}}),
                  ValidationError);
  CHECK_THROWS_AS(validate_query(query({{"shoe_size", ConstraintOp::kEq, {"9"}}}), schema()),
                  ValidationError);
  CHECK_THROWS_AS(validate_query(query({}, "shoe_size"), schema()), ValidationError);
  CHECK_NOTHROW(validate_query(query({}, std::string(kYesNoAnswer)), schema()));
}

TEST_CASE("query collection") {
  std::vector<RecordDoc> recs = {
      make("3", {{"party", txt("Green")}, {"candidate_name", txt("C")}}),
      make("1", {{"party", txt("Green")}, {"candidate_name", txt("A")}}),
      make("2", {{"party", txt("Democrat")}, {"candidate_name", txt("B")}}),
  };
  const auto all = query_collection(query({}), recs, schema());
  REQUIRE(all.size() == 3);
  for (const auto& r : all) CHECK(r.confidence == 1.0);
  CHECK(all[0].doc_id == "1");

  const auto green = query_collection(query({{"party", ConstraintOp::kEq, {"green"}}}), recs, schema());
  CHECK(green[0].doc_id == "1");
  CHECK(green[1].doc_id == "3");
  CHECK(green[1].confidence == 1.0);
  CHECK(green[2].confidence == 0.0);

  CHECK_THROWS_AS(query_collection(query({{"nope", ConstraintOp::kEq, {"x"}}}), recs, schema()),
                  ValidationError);
}

TEST_CASE("extract answers") {
  const std::vector<RecordDoc> fig1 = {
      make("10901", {{"candidate_name", txt("Anna M. Rivers")}, {"election_date", txt("11/08/2020")}}),
      make("454", {{"candidate_name", txt("Anna M. Rivers")}, {"election_date", txt("August 2, 2016")}}),
  };
  auto years = query({}, "election_date");
  years.answer_format = AnswerFormat::kYear;
  CHECK(extract_answers(years, fig1) == AnswerList{"2016", "2020"});
  const std::vector<RecordDoc> reversed(fig1.rbegin(), fig1.rend());
  CHECK(extract_answers(years, reversed) == AnswerList{"2016", "2020"});
  CHECK(extract_answers(query({}, "election_date"), fig1) ==
        AnswerList{"2016-08-02", "2020-11-08"});
  CHECK(extract_answers(query({}), fig1) == AnswerList{"Anna M. Rivers"});
  CHECK(extract_answers(query({}, "party"), fig1).empty());

  const auto yn = query({}, std::string(kYesNoAnswer));
  CHECK(extract_answers(yn, fig1) == AnswerList{"Yes"});
  CHECK(extract_answers(yn, std::vector<RecordDoc>{}) == AnswerList{"No"});
  ExtractOptions literal;
  literal.yes_only = true;
  CHECK(extract_answers(yn, std::vector<RecordDoc>{}, literal).empty());
  CHECK(extract_answers(yn, fig1, literal) == AnswerList{"Yes"});

  const std::vector<RecordDoc> boxes = {
      make("1", {{"reporting_option", RawField{"mini", FieldKind::kCheckbox, true}}}),
      make("2", {{"reporting_option", RawField{"Full", FieldKind::kCheckbox, false}}}),
  };
  CHECK(extract_answers(query({}, "reporting_option"), boxes) == AnswerList{"Mini"});
}

TEST_CASE("properties over a generated collection") {
  FixtureSpec spec;
  spec.n_docs = 200;
  spec.seed = 11;
  const Fixture fx = generate_fixture(spec);
  std::vector<RecordDoc> recs;
  for (const auto& r : fx.records) recs.push_back(normalize_record(r, fx.schema));

  SUBCASE("normalization is idempotent") {
    for (const auto& r : recs) {
      const RecordDoc once = normalize_record(to_raw(r), fx.schema);
      CHECK(normalize_record(to_raw(once), fx.schema) == once);
      for (const auto& [name, v] : r.fields) {
        const auto* again = once.find(name);
        REQUIRE(again != nullptr);
        CHECK(again->normalized == v.normalized);
        CHECK(again->valid == v.valid);
        CHECK(again->date == v.date);
        CHECK(again->checked == v.checked);
      }
    }
  }

  SUBCASE("eq and neq partition the records") {
    for (const char* field : {"party", "office", "candidate_city"}) {
      for (const auto& probe : recs) {
        const auto* v = probe.find(field);
        if (!v || !v->valid) continue;
        const Constraint eq{field, ConstraintOp::kEq, {v->normalized}};
        const Constraint neq{field, ConstraintOp::kNeq, {v->normalized}};
        for (const auto& r : recs) {
          const auto* f = r.find(field);
          const bool e = eval_constraint(r, eq), n = eval_constraint(r, neq);
          if (f && f->valid) {
            CHECK(e != n);
          } else {
            CHECK_FALSE(e);
            CHECK(n);
          }
        }
        break;
      }
    }
  }

  SUBCASE("between equals the composition of after, before and eq") {
    std::set<std::string> dates;
    for (const auto& r : recs) {
      if (const auto* v = r.find("election_date"); v && v->valid) dates.insert(v->normalized);
    }
    const std::vector<std::string> ds(dates.begin(), dates.end());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t j = i; j < ds.size(); ++j) {
        const Constraint between{"election_date", ConstraintOp::kDateBetween, {ds[i], ds[j]}};
        const Constraint after{"election_date", ConstraintOp::kDateAfter, {ds[i]}};
        const Constraint at_a{"election_date", ConstraintOp::kEq, {ds[i]}};
        const Constraint before{"election_date", ConstraintOp::kDateBefore, {ds[j]}};
        const Constraint at_b{"election_date", ConstraintOp::kEq, {ds[j]}};
        for (std::size_t k = 0; k < recs.size(); k += 7) {
          const auto& r = recs[k];
          const bool composed = (eval_constraint(r, after) || eval_constraint(r, at_a)) &&
                                (eval_constraint(r, before) || eval_constraint(r, at_b));
          CHECK(eval_constraint(r, between) == composed);
        }
      }
    }
  }

  SUBCASE("adding a constraint never grows the relevant set") {
    std::mt19937 rng(2);
    std::vector<Constraint> pool;
    for (const auto& q : fx.questions) {
      for (const auto& c : q.query->constraints) pool.push_back(c);
    }
    for (int iter = 0; iter < 100; ++iter) {
      std::vector<Constraint> cs;
      for (int k = 0; k < 3; ++k) cs.push_back(pool[rng() % pool.size()]);
      std::vector<Constraint> fewer(cs.begin(), cs.end() - 1);
      for (const auto& r : recs) {
        if (matches(r, query(cs))) CHECK(matches(r, query(fewer)));
      }
    }
  }

  SUBCASE("extracted answers are unique and independent of record order") {
    std::mt19937 rng(4);
    for (const auto& q : fx.questions) {
      std::vector<RecordDoc> rel;
      for (const auto& r : recs) {
        if (matches(r, *q.query)) rel.push_back(r);
      }
      const auto a = extract_answers(*q.query, rel);
      CHECK(std::set<std::string>(a.begin(), a.end()).size() == a.size());
      std::shuffle(rel.begin(), rel.end(), rng);
      CHECK(extract_answers(*q.query, rel) == a);
    }
  }
}
