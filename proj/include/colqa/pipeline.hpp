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

#ifndef COLQA_PIPELINE_HPP_
#define COLQA_PIPELINE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colqa/context.hpp"
#include "colqa/dataset_io.hpp"
#include "colqa/metrics.hpp"
#include "colqa/qa_adapter.hpp"
#include "colqa/textspot.hpp"

namespace colqa {

enum class Retriever { kTextspot, kRecords, kGroundTruth };
enum class Answerer { kAdapter, kRecords };

std::string_view to_string(Retriever r);
std::string_view to_string(Answerer a);
// "textspot" | "records" | "gt"; throws ValidationError otherwise.
Retriever parse_retriever(std::string_view name);
// "adapter" | "records".
Answerer parse_answerer(std::string_view name);

inline constexpr double kDefaultTheta = 0.9;

struct PipelineConfig {
  Retriever retriever = Retriever::kTextspot;
  Answerer answerer = Answerer::kAdapter;
  // Text-spotting documents count as relevant above this confidence. The
  // binary retrievers (records, gt) use confidence 1 instead.
  double theta = kDefaultTheta;
  bool case_sensitive = false;
  bool yes_only = false;
  bool strict_missing = false;
  unsigned threads = 1;
  double line_tolerance_factor = kDefaultLineToleranceFactor;

  const KeywordExtractor* extractor = nullptr;  // default lexicon when null
  KeywordOverrides keyword_overrides;
  QaAdapter* adapter = nullptr;                     // adapter answerer only
  std::span<const GroundTruthEntry> ground_truth;   // gt retriever only
};

// Throws ValidationError when the chosen retriever/answerer lacks inputs
// (documents, records, queries, adapter, ground truth).
void check_config(const Collection& collection,
                  std::span<const Question> questions,
                  const PipelineConfig& config);

// Retrieval stage only: one submission per question with an empty answer
// list and a full-collection ranking.
std::vector<Submission> rank_questions(const Collection& collection,
                                       std::span<const Question> questions,
                                       const PipelineConfig& config);

// Doc ids treated as relevant for answering, in ranking order.
std::vector<std::string> relevant_for_answering(
    std::span<const RankedDoc> ranking, const PipelineConfig& config);

// Answering stage: fills `answers` of each ranked submission.
std::vector<Submission> answer_questions(const Collection& collection,
                                         std::span<const Question> questions,
                                         std::vector<Submission> ranked,
                                         const PipelineConfig& config);

// Both stages; submissions come back in question order.
std::vector<Submission> run_pipeline(const Collection& collection,
                                     std::span<const Question> questions,
                                     const PipelineConfig& config);

}  // namespace colqa

#endif  // COLQA_PIPELINE_HPP_
