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

#include "colqa/records.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "colqa/errors.hpp"
#include "colqa/text.hpp"

namespace colqa {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kText:
      return "text";
    case FieldKind::kDate:
      return "date";
    case FieldKind::kCheckbox:
      return "checkbox";
  }
  return "?";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "text") return FieldKind::kText;
  if (name == "date") return FieldKind::kDate;
  if (name == "checkbox") return FieldKind::kCheckbox;
  throw ValidationError("unknown field kind '" + std::string(name) + "'");
}

Schema::Schema(std::vector<FieldSpec> fields) : fields_(std::move(fields)) {
  std::set<std::string_view> names;
  for (const auto& f : fields_) {
    if (f.name.empty()) throw ValidationError("schema: empty field name");
    if (!names.insert(f.name).second) {
      throw ValidationError("schema: duplicate field '" + f.name + "'");
    }
  }
}

Schema Schema::candidate_registration() {
  return Schema({
      {"candidate_name", FieldKind::kText, {}},
      {"party",
       FieldKind::kText,
       {"Republican", "Democrat", "Libertarian", "Independent", "Green",
        "Socialist Workers", "Constitution", "Progressive", "Reform",
        "Nonpartisan"}},
      {"office", FieldKind::kText, {}},
      {"candidate_city", FieldKind::kText, {}},
      {"candidate_county", FieldKind::kText, {}},
      {"election_date", FieldKind::kDate, {}},
      {"reporting_option", FieldKind::kCheckbox, {"Mini", "Full"}},
      {"treasurer_name", FieldKind::kText, {}},
  });
}

const FieldSpec* Schema::find(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const FieldSpec& Schema::at(std::string_view name) const {
  if (const auto* f = find(name)) return *f;
  throw ValidationError("unknown field '" + std::string(name) + "'");
}

const FieldValue* RecordDoc::find(std::string_view name) const {
  const auto it = fields.find(std::string(name));
  return it == fields.end() ? nullptr : &it->second;
}

namespace {

bool is_alnum_cp(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z') || c >= 0xC0;
}

char32_t to_upper(char32_t c) {
  if (c >= U'a' && c <= U'z') return c - 0x20;
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 0x20;
  return c;
}

std::string fold_key(std::string_view s) {
  return text::fold_case_utf8(text::collapse_whitespace(s));
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  std::u32string cps = text::decode_utf8(text::collapse_whitespace(raw));
  bool word_start = true;
  for (auto& c : cps) {
    if (is_alnum_cp(c)) {
      c = word_start ? to_upper(c) : text::fold_case(c);
      word_start = false;
    } else if (c != U'\'') {
      word_start = true;
    }
  }
  return text::encode_utf8(cps);
}

std::optional<std::string> snap_to_vocabulary(
    std::string_view value, std::span<const std::string> vocabulary,
    double threshold) {
  const std::string key = fold_key(value);
  const std::string* best = nullptr;
  double best_score = -1.0;
  for (const auto& entry : vocabulary) {
    const double score = text::nls(key, fold_key(entry), false);
    if (score > best_score) {
      best_score = score;
      best = &entry;
    }
  }
  if (best && best_score >= threshold) return *best;
  return std::nullopt;
}

RecordDoc normalize_record(const RawRecord& raw, const Schema& schema,
                           double snap_threshold) {
  RecordDoc out;
  out.doc_id = raw.doc_id;
  for (const auto& [name, field] : raw.fields) {
    const FieldSpec* spec = schema.find(name);
    if (!spec) {
      throw ValidationError("record '" + raw.doc_id + "': unknown field '" +
                            name + "'");
    }
    if (field.kind && *field.kind != spec->kind) {
      throw ValidationError("record '" + raw.doc_id + "': field '" + name +
                            "' declared " + std::string(to_string(*field.kind)) +
                            " but schema says " +
                            std::string(to_string(spec->kind)));
    }
    if (field.checked && spec->kind != FieldKind::kCheckbox) {
      throw ValidationError("record '" + raw.doc_id + "': field '" + name +
                            "' has a checked state but is not a checkbox");
    }

    FieldValue value;
    value.raw = field.raw;
    value.kind = spec->kind;
    const std::string collapsed = text::collapse_whitespace(field.raw);

    if (spec->kind == FieldKind::kDate) {
      if (auto date = parse_date(collapsed)) {
        value.date = *date;
        value.normalized = format_iso(*date);
      } else {
        value.normalized = collapsed;
        value.valid = false;
      }
    } else {
      if (collapsed.empty()) {
        value.valid = false;
      } else if (!spec->vocabulary.empty()) {
        if (auto snapped =
                snap_to_vocabulary(collapsed, spec->vocabulary, snap_threshold)) {
          value.normalized = *snapped;
        } else {
          value.normalized = normalize_text(collapsed);
          value.off_vocabulary = true;
        }
      } else {
        value.normalized = normalize_text(collapsed);
      }
      if (spec->kind == FieldKind::kCheckbox) {
        value.checked = field.checked;
        value.valid = field.checked.has_value();
      }
    }
    out.fields.emplace(name, std::move(value));
  }
  return out;
}

RawRecord to_raw(const RecordDoc& record) {
  RawRecord raw;
  raw.doc_id = record.doc_id;
  for (const auto& [name, value] : record.fields) {
    raw.fields.emplace(name, RawField{value.normalized, value.kind, value.checked});
  }
  return raw;
}

// --- constraints ------------------------------------------------------------

std::string_view to_string(ConstraintOp op) {
  switch (op) {
    case ConstraintOp::kEq:
      return "eq";
    case ConstraintOp::kNeq:
      return "neq";
    case ConstraintOp::kIn:
      return "in";
    case ConstraintOp::kNotIn:
      return "not_in";
    case ConstraintOp::kDateBefore:
      return "date_before";
    case ConstraintOp::kDateAfter:
      return "date_after";
    case ConstraintOp::kDateBetween:
      return "date_between";
    case ConstraintOp::kDateYearEq:
      return "date_year_eq";
    case ConstraintOp::kCheckedEq:
      return "checked_eq";
  }
  return "?";
}

ConstraintOp parse_constraint_op(std::string_view name) {
  for (auto op : {ConstraintOp::kEq, ConstraintOp::kNeq, ConstraintOp::kIn,
                  ConstraintOp::kNotIn, ConstraintOp::kDateBefore,
                  ConstraintOp::kDateAfter, ConstraintOp::kDateBetween,
                  ConstraintOp::kDateYearEq, ConstraintOp::kCheckedEq}) {
    if (to_string(op) == name) return op;
  }
  throw ValidationError("unknown constraint op '" + std::string(name) + "'");
}

namespace {

bool is_negative(ConstraintOp op) {
  return op == ConstraintOp::kNeq || op == ConstraintOp::kNotIn;
}

bool is_date_op(ConstraintOp op) {
  return op == ConstraintOp::kDateBefore || op == ConstraintOp::kDateAfter ||
         op == ConstraintOp::kDateBetween || op == ConstraintOp::kDateYearEq;
}

// A constraint with its values parsed for a given field kind.
struct CompiledConstraint {
  const Constraint* source = nullptr;
  std::vector<std::string> keys;  // folded text values
  std::vector<Date> dates;
  int year = 0;
  bool checked = false;
};

[[noreturn]] void fail(const Constraint& c, const std::string& why) {
  throw ValidationError("constraint " + std::string(to_string(c.op)) + " on '" +
                        c.field + "': " + why);
}

Date parse_date_value(const Constraint& c, const std::string& v) {
  auto d = parse_date(v);
  if (!d) fail(c, "'" + v + "' is not a valid date");
  return *d;
}

void check_kind(const Constraint& c, FieldKind kind) {
  if (is_date_op(c.op) && kind != FieldKind::kDate) {
    fail(c, "date operator on a " + std::string(to_string(kind)) + " field");
  }
  if (c.op == ConstraintOp::kCheckedEq && kind != FieldKind::kCheckbox) {
    fail(c, "checked_eq on a " + std::string(to_string(kind)) + " field");
  }
}

// `kind` is unknown when the constraint is evaluated on its own against a
// record that lacks the field; values are then only checked syntactically.
CompiledConstraint compile(const Constraint& c, std::optional<FieldKind> kind) {
  const std::size_t n = c.values.size();
  switch (c.op) {
    case ConstraintOp::kIn:
    case ConstraintOp::kNotIn:
      if (n == 0) fail(c, "needs at least one value");
      break;
    case ConstraintOp::kDateBetween:
      if (n != 2) fail(c, "needs exactly two values");
      break;
    default:
      if (n != 1) fail(c, "needs exactly one value");
  }
  if (kind) check_kind(c, *kind);

  CompiledConstraint out;
  out.source = &c;
  switch (c.op) {
    case ConstraintOp::kEq:
    case ConstraintOp::kNeq:
    case ConstraintOp::kIn:
    case ConstraintOp::kNotIn:
      for (const auto& v : c.values) {
        if (kind == FieldKind::kDate) {
          out.dates.push_back(parse_date_value(c, v));
        } else {
          out.keys.push_back(fold_key(v));
        }
      }
      break;
    case ConstraintOp::kDateBefore:
    case ConstraintOp::kDateAfter:
    case ConstraintOp::kDateBetween:
      for (const auto& v : c.values) out.dates.push_back(parse_date_value(c, v));
      if (c.op == ConstraintOp::kDateBetween && out.dates[1] < out.dates[0]) {
        fail(c, "lower bound after upper bound");
      }
      break;
    case ConstraintOp::kDateYearEq: {
      const std::string v = text::trim(c.values[0]);
      if (v.empty() || v.size() > 4 ||
          !std::all_of(v.begin(), v.end(),
                       [](char ch) { return ch >= '0' && ch <= '9'; })) {
        fail(c, "'" + c.values[0] + "' is not a year");
      }
      out.year = std::stoi(v);
      break;
    }
    case ConstraintOp::kCheckedEq: {
      const std::string v = text::to_lower_ascii(text::trim(c.values[0]));
      if (v == "true" || v == "yes") {
        out.checked = true;
      } else if (v == "false" || v == "no") {
        out.checked = false;
      } else {
        fail(c, "'" + c.values[0] + "' is not a boolean");
      }
      break;
    }
  }
  return out;
}

// Only called on present, valid fields of the right kind.
bool value_matches(const FieldValue& fv, const CompiledConstraint& cc) {
  const Constraint& c = *cc.source;
  switch (c.op) {
    case ConstraintOp::kEq:
    case ConstraintOp::kNeq:
    case ConstraintOp::kIn:
    case ConstraintOp::kNotIn:
      if (fv.kind == FieldKind::kDate) {
        return std::find(cc.dates.begin(), cc.dates.end(), *fv.date) !=
               cc.dates.end();
      } else {
        const std::string key = fold_key(fv.normalized);
        return std::find(cc.keys.begin(), cc.keys.end(), key) != cc.keys.end();
      }
    case ConstraintOp::kDateBefore:
      return *fv.date < cc.dates[0];
    case ConstraintOp::kDateAfter:
      return *fv.date > cc.dates[0];
    case ConstraintOp::kDateBetween: {
      const Date& d = *fv.date;
      const bool above = c.lower_inclusive ? d >= cc.dates[0] : d > cc.dates[0];
      const bool below = c.upper_inclusive ? d <= cc.dates[1] : d < cc.dates[1];
      return above && below;
    }
    case ConstraintOp::kDateYearEq:
      return year_of(*fv.date) == cc.year;
    case ConstraintOp::kCheckedEq:
      return *fv.checked == cc.checked;
  }
  return false;
}

bool evaluate_compiled(const RecordDoc& record, const CompiledConstraint& cc,
                       const QueryOptions& options) {
  const Constraint& c = *cc.source;
  const FieldValue* fv = record.find(c.field);
  const bool usable = fv && fv->valid;
  const bool hit = usable && value_matches(*fv, cc);
  if (is_negative(c.op)) {
    return options.strict_missing ? usable && !hit : !hit;
  }
  return hit;
}

struct CompiledQuery {
  std::vector<CompiledConstraint> constraints;
};

CompiledQuery compile_query(const StructuredQuery& query, const Schema& schema) {
  CompiledQuery out;
  for (const auto& c : query.constraints) {
    const FieldSpec* spec = schema.find(c.field);
    if (!spec) {
      throw ValidationError("query '" + query.question_id +
                            "': unknown field '" + c.field + "'");
    }
    out.constraints.push_back(compile(c, spec->kind));
  }
  if (!query.is_yes_no() && !schema.find(query.answer_field)) {
    throw ValidationError("query '" + query.question_id +
                          "': unknown answer field '" + query.answer_field +
                          "'");
  }
  return out;
}

bool matches_compiled(const RecordDoc& record, const CompiledQuery& q,
                      const QueryOptions& options) {
  return std::all_of(q.constraints.begin(), q.constraints.end(),
                     [&](const CompiledConstraint& cc) {
                       return evaluate_compiled(record, cc, options);
                     });
}

}  // namespace

void validate_query(const StructuredQuery& query, const Schema& schema) {
  compile_query(query, schema);
}

bool eval_constraint(const RecordDoc& record, const Constraint& constraint,
                     const QueryOptions& options) {
  const FieldValue* fv = record.find(constraint.field);
  const auto cc =
      compile(constraint, fv ? std::optional(fv->kind) : std::nullopt);
  return evaluate_compiled(record, cc, options);
}

bool matches(const RecordDoc& record, const StructuredQuery& query,
             const QueryOptions& options) {
  return std::all_of(query.constraints.begin(), query.constraints.end(),
                     [&](const Constraint& c) {
                       return eval_constraint(record, c, options);
                     });
}

std::vector<RankedDoc> query_collection(const StructuredQuery& query,
                                        std::span<const RecordDoc> records,
                                        const Schema& schema,
                                        const QueryOptions& options) {
  const CompiledQuery compiled = compile_query(query, schema);
  std::vector<RankedDoc> ranking;
  ranking.reserve(records.size());
  for (const auto& r : records) {
    ranking.push_back(
        {r.doc_id, matches_compiled(r, compiled, options) ? 1.0 : 0.0});
  }
  sort_ranking(ranking);
  return ranking;
}

AnswerList extract_answers(const StructuredQuery& query,
                           std::span<const RecordDoc> relevant,
                           const ExtractOptions& options) {
  if (query.is_yes_no()) {
    if (!relevant.empty()) return {"Yes"};
    if (options.yes_only) return {};
    return {"No"};
  }
  std::set<std::string> answers;
  for (const auto& record : relevant) {
    const FieldValue* fv = record.find(query.answer_field);
    if (!fv || !fv->valid) {
      spdlog::debug("record '{}' has no usable '{}' value", record.doc_id,
                    query.answer_field);
      continue;
    }
    switch (fv->kind) {
      case FieldKind::kDate:
        answers.insert(query.answer_format == AnswerFormat::kYear
                           ? std::to_string(year_of(*fv->date))
                           : format_iso(*fv->date));
        break;
      case FieldKind::kCheckbox:
        // The label names the selected option; an unticked box selects
        // nothing.
        if (*fv->checked) answers.insert(fv->normalized);
        break;
      case FieldKind::kText:
        answers.insert(fv->normalized);
        break;
    }
  }
  return {answers.begin(), answers.end()};
}

}  // namespace colqa
