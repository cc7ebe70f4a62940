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

#ifndef COLQA_TEXTSPOT_HPP_
#define COLQA_TEXTSPOT_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "colqa/metrics.hpp"

namespace colqa {

struct BBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double height() const { return y2 - y1; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

// One recognized word.
struct Token {
  std::string text;
  BBox bbox;
  std::optional<double> ocr_confidence;

  friend bool operator==(const Token&, const Token&) = default;
};

struct PageSize {
  double width = 0, height = 0;
  friend bool operator==(const PageSize&, const PageSize&) = default;
};

// OCR output of one document image.
struct DocumentOcr {
  std::string doc_id;
  std::vector<Token> tokens;
  std::optional<PageSize> page_size;

  friend bool operator==(const DocumentOcr&, const DocumentOcr&) = default;
};

// Lowercased, deduplicated query words in first-occurrence order.
struct KeywordSet {
  std::vector<std::string> keywords;

  bool empty() const { return keywords.empty(); }
  std::size_t size() const { return keywords.size(); }
};

class KeywordExtractor {
 public:
  virtual ~KeywordExtractor() = default;
  virtual KeywordSet extract(std::string_view question) const = 0;
};

// Approximates a noun/digit filter without a POS tagger. A question word is
// kept when it contains a digit, is capitalized anywhere but the first
// position, or is absent from a stopword + common-verb lexicon. Hyphenated
// words are split; a trailing period survives on initials ("M.").
class LexiconKeywordExtractor : public KeywordExtractor {
 public:
  LexiconKeywordExtractor();
  explicit LexiconKeywordExtractor(std::unordered_set<std::string> lexicon);

  KeywordSet extract(std::string_view question) const override;

  static const std::unordered_set<std::string>& default_lexicon();

 private:
  std::unordered_set<std::string> lexicon_;
};

// Runs the extractor and checks the result. Throws ValidationError when the
// question is empty or yields no content words; other extractor failures are
// rethrown as RuntimeFailure carrying the question text.
KeywordSet extract_keywords(std::string_view question_text,
                            const KeywordExtractor& extractor);

struct TextspotOptions {
  bool case_fold = true;
  unsigned threads = 1;
};

// 1 - mean over keywords of the minimum NLD to any document token. Zero
// tokens score 0. Throws std::invalid_argument on an empty keyword set.
double doc_confidence(const KeywordSet& keywords, const DocumentOcr& doc,
                      bool case_fold = true);

// One entry per document, sorted with ranks_before. Throws ValidationError on
// duplicate doc ids or an empty collection.
std::vector<RankedDoc> rank_collection(const KeywordSet& keywords,
                                       std::span<const DocumentOcr> docs,
                                       const TextspotOptions& options = {});

// Doc ids with confidence strictly above theta, in ranking order.
std::vector<std::string> threshold_relevant(std::span<const RankedDoc> ranking,
                                            double theta);

}  // namespace colqa

#endif  // COLQA_TEXTSPOT_HPP_
