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

#ifndef COLQA_DATASET_IO_HPP_
#define COLQA_DATASET_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "colqa/metrics.hpp"
#include "colqa/records.hpp"
#include "colqa/textspot.hpp"

namespace colqa {

// File names inside a dataset directory.
inline constexpr const char* kDocumentsFile = "documents.json";
inline constexpr const char* kRecordsFile = "records.json";
inline constexpr const char* kSchemaFile = "schema.json";
inline constexpr const char* kQuestionsFile = "questions.json";
inline constexpr const char* kGroundTruthFile = "gt.json";
inline constexpr const char* kKeywordsFile = "keywords.json";

struct Question {
  std::string question_id;
  std::string text;
  std::optional<StructuredQuery> query;  // absent for text-only questions

  friend bool operator==(const Question&, const Question&) = default;
};

struct Collection {
  Schema schema;
  std::vector<DocumentOcr> documents;
  std::vector<RawRecord> raw_records;
  std::vector<RecordDoc> records;  // normalized raw_records, same order

  std::set<std::string> doc_ids() const;
};

using KeywordOverrides = std::map<std::string, std::vector<std::string>>;

// All loaders throw ValidationError naming the file, the JSON path (or line
// for syntax errors) and the reason. Writers emit UTF-8 JSON with fixed key
// order, two-space indentation and a trailing newline.

std::vector<DocumentOcr> load_documents(const std::filesystem::path& path);
void save_documents(const std::filesystem::path& path,
                    std::span<const DocumentOcr> docs);

Schema load_schema(const std::filesystem::path& path);
void save_schema(const std::filesystem::path& path, const Schema& schema);

std::vector<RawRecord> load_raw_records(const std::filesystem::path& path);
void save_raw_records(const std::filesystem::path& path,
                      std::span<const RawRecord> records);

// Reads documents.json and/or records.json (at least one must exist) plus an
// optional schema.json from `dir`; the bundled candidate-registration schema
// is used when schema.json is absent. Records are normalized on load.
Collection load_collection(const std::filesystem::path& dir);

// Queries are validated against `schema` when one is given.
std::vector<Question> load_questions(const std::filesystem::path& path,
                                     const Schema* schema = nullptr);
void save_questions(const std::filesystem::path& path,
                    std::span<const Question> questions);

// Every relevant doc id must be in `known_doc_ids` when that is given.
std::vector<GroundTruthEntry> load_gt(
    const std::filesystem::path& path,
    const std::set<std::string>* known_doc_ids = nullptr);
void save_gt(const std::filesystem::path& path,
             std::span<const GroundTruthEntry> gt);

std::vector<Submission> load_submissions(const std::filesystem::path& path);
void save_submissions(const std::filesystem::path& path,
                      std::span<const Submission> submissions);

KeywordOverrides load_keyword_overrides(const std::filesystem::path& path);

void save_report(const std::filesystem::path& path, const MetricReport& report);
MetricReport load_report(const std::filesystem::path& path);
// Fixed-width per-question table followed by the overall scores.
std::string render_report_table(const MetricReport& report);

// Cross-file checks: unique ids, gt references, question/gt id agreement.
// Returns human-readable warnings; hard errors throw ValidationError.
std::vector<std::string> validate_dataset(const Collection& collection,
                                          std::span<const Question> questions,
                                          std::span<const GroundTruthEntry> gt);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace colqa

#endif  // COLQA_DATASET_IO_HPP_
