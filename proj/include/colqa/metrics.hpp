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

#ifndef COLQA_METRICS_HPP_
#define COLQA_METRICS_HPP_

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colqa/hungarian.hpp"
#include "colqa/text.hpp"

namespace colqa {

// Unordered list of answers; order carries no meaning for scoring.
using AnswerList = std::vector<std::string>;

struct RankedDoc {
  std::string doc_id;
  double confidence = 0.0;

  friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

// Ranking order used everywhere: confidence descending, then doc_id
// ascending.
bool ranks_before(const RankedDoc& a, const RankedDoc& b);
void sort_ranking(std::vector<RankedDoc>& ranking);

struct GroundTruthEntry {
  std::string question_id;
  AnswerList answers;
  std::set<std::string> relevant_doc_ids;
};

struct Submission {
  std::string question_id;
  AnswerList answers;
  std::vector<RankedDoc> ranking;
};

struct QuestionScore {
  std::string question_id;
  double ap = 0.0;
  double anlsl = 0.0;
};

struct MetricReport {
  double map_percent = 0.0;  // 100 x mean AP
  double anlsl = 0.0;        // mean ANLSL, in [0, 1]
  std::vector<QuestionScore> per_question;  // sorted by question_id
};

struct AnlslOptions {
  // Matched pairs scoring below tau contribute 0. tau = 0 is the plain
  // list formula without a per-pair threshold.
  double tau = 0.5;
  bool case_fold = true;
};

using text::nls;

// NLS matrix with ground truth on rows and predictions on columns.
ScoreMatrix nls_matrix(std::span<const std::string> gt,
                       std::span<const std::string> pred, bool case_fold);

// List-aware ANLS. Both empty -> 1, exactly one empty -> 0, otherwise the
// optimal NLS assignment (thresholded at tau) summed over max(M, N).
double anlsl(std::span<const std::string> gt, std::span<const std::string> pred,
             const AnlslOptions& options = {});

// Average precision of `ranking` (re-sorted with ranks_before) against the
// relevant set. Relevant documents missing from the ranking count as never
// retrieved. Throws ValidationError on an empty relevant set or duplicate
// doc ids.
double average_precision(std::span<const RankedDoc> ranking,
                         const std::set<std::string>& relevant);

// Scores every ground-truth question. Each gt question_id must appear in
// submissions exactly once, and submissions may not name unknown questions.
MetricReport evaluate(std::span<const Submission> submissions,
                      std::span<const GroundTruthEntry> gt,
                      const AnlslOptions& options = {});

}  // namespace colqa

#endif  // COLQA_METRICS_HPP_
