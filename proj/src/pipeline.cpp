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

#include "colqa/pipeline.hpp"

#include <map>
#include <unordered_map>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "colqa/errors.hpp"
#include "colqa/parallel.hpp"
#include "colqa/records.hpp"

namespace colqa {

std::string_view to_string(Retriever r) {
  switch (r) {
    case Retriever::kTextspot:
      return "textspot";
    case Retriever::kRecords:
      return "records";
    case Retriever::kGroundTruth:
      return "gt";
  }
  return "?";
}

std::string_view to_string(Answerer a) {
  return a == Answerer::kAdapter ? "adapter" : "records";
}

Retriever parse_retriever(std::string_view name) {
  for (auto r : {Retriever::kTextspot, Retriever::kRecords,
                 Retriever::kGroundTruth}) {
    if (to_string(r) == name) return r;
  }
  throw ValidationError("unknown retriever '" + std::string(name) +
                        "' (expected textspot, records or gt)");
}

Answerer parse_answerer(std::string_view name) {
  for (auto a : {Answerer::kAdapter, Answerer::kRecords}) {
    if (to_string(a) == name) return a;
  }
  throw ValidationError("unknown answerer '" + std::string(name) +
                        "' (expected adapter or records)");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("configuration: " + what);
}

void check_retriever(const Collection& collection,
                     std::span<const Question> questions,
                     const PipelineConfig& config) {
  switch (config.retriever) {
    case Retriever::kTextspot:
      require(!collection.documents.empty(),
              "textspot retrieval needs OCR documents (documents.json)");
      break;
    case Retriever::kRecords:
      require(!collection.records.empty(),
              "records retrieval needs records (records.json)");
      for (const auto& q : questions) {
        require(q.query.has_value(),
                "records retrieval needs a structured query for question '" +
                    q.question_id + "'");
        validate_query(*q.query, collection.schema);
      }
      break;
    case Retriever::kGroundTruth: {
      std::unordered_set<std::string_view> have;
      for (const auto& e : config.ground_truth) have.insert(e.question_id);
      for (const auto& q : questions) {
        require(have.contains(q.question_id),
                "gt ranking needs ground truth for question '" +
                    q.question_id + "'");
      }
      require(!collection.doc_ids().empty(), "empty collection");
      break;
    }
  }
}

void check_answerer(const Collection& collection,
                    std::span<const Question> questions,
                    const PipelineConfig& config) {
  switch (config.answerer) {
    case Answerer::kAdapter:
      require(config.adapter != nullptr,
              "adapter answering needs an adapter endpoint (--adapter)");
      require(!collection.documents.empty(),
              "adapter answering needs OCR documents (documents.json)");
      break;
    case Answerer::kRecords:
      require(!collection.records.empty(),
              "records answering needs records (records.json)");
      for (const auto& q : questions) {
        require(q.query.has_value(),
                "records answering needs a structured query for question '" +
                    q.question_id + "'");
        validate_query(*q.query, collection.schema);
      }
      break;
  }
}

void check_ranker(const Collection& collection,
                  std::span<const Question> questions,
                  const PipelineConfig& config) {
  std::unordered_set<std::string_view> ids;
  for (const auto& q : questions) {
    require(ids.insert(q.question_id).second,
            "duplicate question id '" + q.question_id + "'");
  }
  check_retriever(collection, questions, config);
}

std::vector<RankedDoc> rank_textspot(const Collection& collection,
                                     const Question& question,
                                     const KeywordExtractor& extractor,
                                     const PipelineConfig& config) {
  KeywordSet keywords;
  if (const auto it = config.keyword_overrides.find(question.question_id);
      it != config.keyword_overrides.end()) {
    keywords.keywords = it->second;
  } else {
    try {
      keywords = extract_keywords(question.text, extractor);
    } catch (const ValidationError& e) {
      spdlog::warn("question '{}': {}; every document scores 0",
                   question.question_id, e.what());
      std::vector<RankedDoc> ranking;
      for (const auto& d : collection.documents) ranking.push_back({d.doc_id, 0.0});
      sort_ranking(ranking);
      return ranking;
    }
  }
  TextspotOptions options;
  options.case_fold = !config.case_sensitive;
  return rank_collection(keywords, collection.documents, options);
}

std::vector<RankedDoc> rank_ground_truth(const Collection& collection,
                                         const GroundTruthEntry& entry) {
  const auto ids = collection.doc_ids();
  std::vector<RankedDoc> ranking;
  for (const auto& id : ids) {
    ranking.push_back({id, entry.relevant_doc_ids.contains(id) ? 1.0 : 0.0});
  }
  for (const auto& id : entry.relevant_doc_ids) {
    if (!ids.contains(id)) {
      throw ValidationError("gt question '" + entry.question_id +
                            "' references unknown doc_id '" + id + "'");
    }
  }
  sort_ranking(ranking);
  return ranking;
}

}  // namespace

void check_config(const Collection& collection,
                  std::span<const Question> questions,
                  const PipelineConfig& config) {
  check_ranker(collection, questions, config);
  check_answerer(collection, questions, config);
}

std::vector<Submission> rank_questions(const Collection& collection,
                                       std::span<const Question> questions,
                                       const PipelineConfig& config) {
  check_ranker(collection, questions, config);
  const LexiconKeywordExtractor default_extractor;
  const KeywordExtractor& extractor =
      config.extractor ? *config.extractor : default_extractor;
  std::map<std::string_view, const GroundTruthEntry*> gt;
  for (const auto& e : config.ground_truth) gt.emplace(e.question_id, &e);

  QueryOptions query_options;
  query_options.strict_missing = config.strict_missing;

  std::vector<Submission> out(questions.size());
  detail::parallel_for(questions.size(), config.threads, [&](std::size_t i) {
    const Question& q = questions[i];
    out[i].question_id = q.question_id;
    switch (config.retriever) {
      case Retriever::kTextspot:
        out[i].ranking = rank_textspot(collection, q, extractor, config);
        break;
      case Retriever::kRecords:
        out[i].ranking = query_collection(*q.query, collection.records,
                                          collection.schema, query_options);
        break;
      case Retriever::kGroundTruth:
        out[i].ranking = rank_ground_truth(collection, *gt.at(q.question_id));
        break;
    }
  });
  return out;
}

std::vector<std::string> relevant_for_answering(
    std::span<const RankedDoc> ranking, const PipelineConfig& config) {
  if (config.retriever == Retriever::kTextspot) {
    return threshold_relevant(ranking, config.theta);
  }
  std::vector<std::string> out;
  for (const auto& d : ranking) {
    if (d.confidence >= 1.0) out.push_back(d.doc_id);
  }
  return out;
}

std::vector<Submission> answer_questions(const Collection& collection,
                                         std::span<const Question> questions,
                                         std::vector<Submission> ranked,
                                         const PipelineConfig& config) {
  check_answerer(collection, questions, config);
  std::unordered_map<std::string_view, const Question*> by_id;
  for (const auto& q : questions) by_id.emplace(q.question_id, &q);
  for (const auto& s : ranked) {
    if (!by_id.contains(s.question_id)) {
      throw ValidationError("ranking for unknown question '" + s.question_id +
                            "'");
    }
  }

  std::unordered_map<std::string_view, const DocumentOcr*> docs;
  for (const auto& d : collection.documents) docs.emplace(d.doc_id, &d);
  std::unordered_map<std::string_view, const RecordDoc*> records;
  for (const auto& r : collection.records) records.emplace(r.doc_id, &r);

  ExtractOptions extract_options;
  extract_options.yes_only = config.yes_only;
  AnswerDocumentsOptions answer_options;
  answer_options.line_tolerance_factor = config.line_tolerance_factor;

  detail::parallel_for(ranked.size(), config.threads, [&](std::size_t i) {
    Submission& sub = ranked[i];
    const Question& q = *by_id.at(sub.question_id);
    const auto relevant = relevant_for_answering(sub.ranking, config);
    switch (config.answerer) {
      case Answerer::kRecords: {
        std::vector<RecordDoc> rel;
        for (const auto& id : relevant) {
          if (const auto it = records.find(id); it != records.end()) {
            rel.push_back(*it->second);
          }
        }
        sub.answers = extract_answers(*q.query, rel, extract_options);
        break;
      }
      case Answerer::kAdapter: {
        std::vector<DocumentOcr> ordered;
        std::vector<std::string> ids;
        for (const auto& id : relevant) {
          if (const auto it = docs.find(id); it != docs.end()) {
            ordered.push_back(*it->second);
            ids.push_back(id);
          }
        }
        sub.answers = answer_documents(q.text, ordered, ids, *config.adapter,
                                       answer_options)
                          .answers;
        break;
      }
    }
  });
  return ranked;
}

std::vector<Submission> run_pipeline(const Collection& collection,
                                     std::span<const Question> questions,
                                     const PipelineConfig& config) {
  check_config(collection, questions, config);
  return answer_questions(collection, questions,
                          rank_questions(collection, questions, config), config);
}

}  // namespace colqa
