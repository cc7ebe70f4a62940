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

#ifndef COLQA_FIXTURE_HPP_
#define COLQA_FIXTURE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "colqa/dataset_io.hpp"

namespace colqa {

struct FixtureSpec {
  std::size_t n_docs = 500;
  std::uint64_t seed = 7;
  // Distinct values per field; fields not listed use the defaults below.
  std::map<std::string, std::size_t> field_cardinalities;
  // Probability that a field is absent from a record.
  std::map<std::string, double> missing_rates;
  // Instances generated per question template.
  std::size_t questions_per_template = 2;
};

// Per-field defaults modelled on the candidate-registration statistics:
// party 10, office 43, county 39, election date 27 and reporting option 2
// distinct values; names, treasurers and cities scale with the collection
// (about 65%, 71% and 3.3% of n_docs). Missing rates follow the share of
// empty annotations (party 1.4%, the rest well under 1%).
std::size_t default_cardinality(const std::string& field, std::size_t n_docs);
double default_missing_rate(const std::string& field);

// Throws ValidationError on zero documents, cardinalities below 1 or above
// what the field or collection allows, or rates outside [0, 1].
void validate_fixture_spec(const FixtureSpec& spec);

struct Fixture {
  Schema schema;
  std::vector<DocumentOcr> documents;
  std::vector<RawRecord> records;
  std::vector<Question> questions;
  std::vector<GroundTruthEntry> gt;
};

// Seeded synthetic candidate-registration collection: raw key-value records
// (dates in mixed formats, text in mixed case), OCR token layouts with one
// line per field, one or more questions per constraint type, and ground
// truth computed by filtering the generator's canonical values. Identical
// specs give identical fixtures on every platform.
Fixture generate_fixture(const FixtureSpec& spec);

// Writes documents.json, records.json, schema.json, questions.json, gt.json.
void save_fixture(const std::filesystem::path& dir, const Fixture& fixture);

struct NoiseReport {
  std::size_t answer_fields = 0;  // distinct (record, answer field) pairs
  std::size_t target = 0;         // round(rate * answer_fields)
  std::size_t injected = 0;
};

// Replaces one letter in the raw value of a `rate` share of the answer
// fields (free-text fields that answer some question for a relevant
// record). Edits that would change any question's relevant set are skipped,
// so retrieval is unaffected while the extracted answers drift.
NoiseReport inject_answer_noise(Fixture& fixture, double rate,
                                std::uint64_t seed);

}  // namespace colqa

#endif  // COLQA_FIXTURE_HPP_
