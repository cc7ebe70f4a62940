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

#include "colqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "colqa/errors.hpp"

namespace colqa {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

bool ranks_before(const RankedDoc& a, const RankedDoc& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return a.doc_id < b.doc_id;
}

void sort_ranking(std::vector<RankedDoc>& ranking) {
  std::sort(ranking.begin(), ranking.end(), ranks_before);
}

ScoreMatrix nls_matrix(std::span<const std::string> gt,
                       std::span<const std::string> pred, bool case_fold) {
  std::vector<std::u32string> g, p;
  g.reserve(gt.size());
  p.reserve(pred.size());
  for (const auto& s : gt) {
    g.push_back(case_fold ? text::fold_case(text::decode_utf8(s))
                          : text::decode_utf8(s));
  }
  for (const auto& s : pred) {
    p.push_back(case_fold ? text::fold_case(text::decode_utf8(s))
                          : text::decode_utf8(s));
  }
  ScoreMatrix m(g.size(), p.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) m(i, j) = text::nls(g[i], p[j]);
  }
  return m;
}

double anlsl(std::span<const std::string> gt, std::span<const std::string> pred,
             const AnlslOptions& options) {
  if (!(options.tau >= 0.0 && options.tau <= 1.0)) {
    throw std::invalid_argument("anlsl: tau must lie in [0, 1]");
  }
  if (gt.empty() && pred.empty()) return 1.0;
  if (gt.empty() || pred.empty()) return 0.0;

  const auto assignment =
      hungarian_match(nls_matrix(gt, pred, options.case_fold));
  double sum = 0.0;
  for (const auto& pair : assignment.pairs) {
    if (pair.score >= options.tau) sum += pair.score;
  }
  return sum / static_cast<double>(std::max(gt.size(), pred.size()));
}

double average_precision(std::span<const RankedDoc> ranking,
                         const std::set<std::string>& relevant) {
  if (relevant.empty()) {
    throw ValidationError("average_precision: empty relevant set");
  }
  std::vector<RankedDoc> sorted(ranking.begin(), ranking.end());
  sort_ranking(sorted);
  std::unordered_set<std::string_view> seen;
  for (const auto& doc : sorted) {
    if (!seen.insert(doc.doc_id).second) {
      throw ValidationError("average_precision: duplicate doc_id '" +
                            doc.doc_id + "' in ranking");
    }
  }

  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < sorted.size(); ++rank) {
    if (relevant.contains(sorted[rank].doc_id)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

MetricReport evaluate(std::span<const Submission> submissions,
                      std::span<const GroundTruthEntry> gt,
                      const AnlslOptions& options) {
  std::map<std::string, const Submission*> by_id;
  std::vector<std::string> duplicates;
  for (const auto& s : submissions) {
    if (!by_id.emplace(s.question_id, &s).second) {
      duplicates.push_back(s.question_id);
    }
  }
  std::map<std::string, const GroundTruthEntry*> gt_by_id;
  std::vector<std::string> missing, duplicate_gt;
  for (const auto& g : gt) {
    if (!gt_by_id.emplace(g.question_id, &g).second) {
      duplicate_gt.push_back(g.question_id);
    }
    if (!by_id.contains(g.question_id)) missing.push_back(g.question_id);
  }
  std::vector<std::string> unknown;
  for (const auto& [id, _] : by_id) {
    if (!gt_by_id.contains(id)) unknown.push_back(id);
  }

  std::string problems;
  auto note = [&](const char* what, std::vector<std::string> ids) {
    if (ids.empty()) return;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (!problems.empty()) problems += "; ";
    problems += what;
    problems += ": ";
    problems += join_ids(ids);
  };
  note("missing submissions for questions", missing);
  note("duplicate submissions for questions", duplicates);
  note("duplicate ground-truth questions", duplicate_gt);
  note("submissions for unknown questions", unknown);
  if (!problems.empty()) throw ValidationError("evaluate: " + problems);

  MetricReport report;
  report.per_question.reserve(gt_by_id.size());
  double ap_sum = 0.0, anlsl_sum = 0.0;
  for (const auto& [id, entry] : gt_by_id) {
    const Submission& sub = *by_id.at(id);
    QuestionScore score;
    score.question_id = id;
    score.ap = average_precision(sub.ranking, entry->relevant_doc_ids);
    score.anlsl = anlsl(entry->answers, sub.answers, options);
    ap_sum += score.ap;
    anlsl_sum += score.anlsl;
    report.per_question.push_back(std::move(score));
  }
  if (!report.per_question.empty()) {
    const auto n = static_cast<double>(report.per_question.size());
    report.map_percent = 100.0 * ap_sum / n;
    report.anlsl = anlsl_sum / n;
  }
  return report;
}

}  // namespace colqa
