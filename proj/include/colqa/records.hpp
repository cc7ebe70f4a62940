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

#ifndef COLQA_RECORDS_HPP_
#define COLQA_RECORDS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colqa/dates.hpp"
#include "colqa/metrics.hpp"

namespace colqa {

enum class FieldKind { kText, kDate, kCheckbox };

std::string_view to_string(FieldKind kind);
// Throws ValidationError on an unknown name.
FieldKind parse_field_kind(std::string_view name);

struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::kText;
  // Closed vocabulary; empty means free text.
  std::vector<std::string> vocabulary;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

class Schema {
 public:
  Schema() = default;
  // Throws ValidationError on duplicate field names.
  explicit Schema(std::vector<FieldSpec> fields);

  // Candidate-registration form fields: candidate_name, party, office,
  // candidate_city, candidate_county, election_date (date), reporting_option
  // (checkbox, Mini/Full) and treasurer_name. Party and reporting option carry
  // closed vocabularies.
  static Schema candidate_registration();

  const std::vector<FieldSpec>& fields() const { return fields_; }
  const FieldSpec* find(std::string_view name) const;
  const FieldSpec& at(std::string_view name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<FieldSpec> fields_;
};

// A field as delivered by the key-value extractor.
struct RawField {
  std::string raw;
  std::optional<FieldKind> kind;  // declared kind, checked against the schema
  std::optional<bool> checked;    // checkbox state when readable

  friend bool operator==(const RawField&, const RawField&) = default;
};

struct RawRecord {
  std::string doc_id;
  std::map<std::string, RawField> fields;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct FieldValue {
  std::string raw;
  std::string normalized;
  FieldKind kind = FieldKind::kText;
  std::optional<bool> checked;  // checkbox only
  std::optional<Date> date;     // date only, set iff the date parsed
  // False for unparseable dates, unreadable checkbox states and blank values.
  bool valid = true;
  // Closed-vocabulary field whose value was too far from every entry.
  bool off_vocabulary = false;

  friend bool operator==(const FieldValue&, const FieldValue&) = default;
};

struct RecordDoc {
  std::string doc_id;
  std::map<std::string, FieldValue> fields;

  const FieldValue* find(std::string_view name) const;
  friend bool operator==(const RecordDoc&, const RecordDoc&) = default;
};

inline constexpr double kDefaultSnapThreshold = 0.8;

// Whitespace collapse plus title case ("anna  m. RIVERS" -> "Anna M. Rivers").
std::string normalize_text(std::string_view raw);

// Snaps `value` to the most similar vocabulary entry when its case-folded NLS
// reaches `threshold`; the first entry wins ties.
std::optional<std::string> snap_to_vocabulary(
    std::string_view value, std::span<const std::string> vocabulary,
    double threshold = kDefaultSnapThreshold);

// Normalizes every field. Unparseable dates and unreadable checkboxes are kept
// but marked invalid. Throws ValidationError for fields outside the schema or
// whose declared kind disagrees with it.
RecordDoc normalize_record(const RawRecord& raw, const Schema& schema,
                           double snap_threshold = kDefaultSnapThreshold);

// Raw view of a normalized record (normalized strings become raw values).
RawRecord to_raw(const RecordDoc& record);

enum class ConstraintOp {
  kEq,
  kNeq,
  kIn,
  kNotIn,
  kDateBefore,
  kDateAfter,
  kDateBetween,
  kDateYearEq,
  kCheckedEq,
};

std::string_view to_string(ConstraintOp op);
ConstraintOp parse_constraint_op(std::string_view name);

struct Constraint {
  std::string field;
  ConstraintOp op = ConstraintOp::kEq;
  std::vector<std::string> values;
  // Lower/upper bound inclusiveness for date_between.
  bool lower_inclusive = true;
  bool upper_inclusive = true;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

inline constexpr std::string_view kYesNoAnswer = "yes_no";

enum class AnswerFormat { kDate, kYear };

struct StructuredQuery {
  std::string question_id;
  std::vector<Constraint> constraints;  // conjunction; empty matches all
  std::string answer_field;             // schema field or kYesNoAnswer
  AnswerFormat answer_format = AnswerFormat::kDate;

  bool is_yes_no() const { return answer_field == kYesNoAnswer; }
  friend bool operator==(const StructuredQuery&, const StructuredQuery&) = default;
};

struct QueryOptions {
  // When set, neq/not_in also require the field to be present and valid.
  bool strict_missing = false;
};

// Checks fields, op/kind compatibility, arity and value syntax.
void validate_query(const StructuredQuery& query, const Schema& schema);

// Positive ops (eq, in, date ops, checked_eq) need a present, valid, matching
// field. Negative ops (neq, not_in) hold unless the field is present, valid
// and matching. Throws ValidationError on malformed constraints or when a
// date/checkbox op meets a field of another kind.
bool eval_constraint(const RecordDoc& record, const Constraint& constraint,
                     const QueryOptions& options = {});

bool matches(const RecordDoc& record, const StructuredQuery& query,
             const QueryOptions& options = {});

// Binary confidence over the whole collection (1 when every constraint
// holds), sorted with ranks_before.
std::vector<RankedDoc> query_collection(const StructuredQuery& query,
                                        std::span<const RecordDoc> records,
                                        const Schema& schema,
                                        const QueryOptions& options = {});

struct ExtractOptions {
  // Reproduce the baseline that can only say "Yes": a yes/no question with no
  // matching record gets no answer instead of "No".
  bool yes_only = false;
};

// Sorted, deduplicated answers from the relevant records. Yes/no questions
// answer "Yes" when any record is relevant and "No" otherwise.
AnswerList extract_answers(const StructuredQuery& query,
                           std::span<const RecordDoc> relevant,
                           const ExtractOptions& options = {});

}  // namespace colqa

#endif  // COLQA_RECORDS_HPP_
