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

#include "colqa/textspot.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "colqa/errors.hpp"
#include "colqa/parallel.hpp"
#include "colqa/text.hpp"

namespace colqa {

namespace {

// Function words plus frequent verbs and auxiliaries. Verbs matter here: a
// question verb such as "run" is rarely printed on a form, so keeping it only
// drags every document's score down.
constexpr const char* kLexicon[] = {
    // articles, determiners, pronouns
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "all",
    "each", "every", "either", "neither", "both", "no", "not", "nor", "none",
    "i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours",
    "he", "him", "his", "she", "her", "hers", "it", "its", "they", "them",
    "their", "theirs", "himself", "herself", "itself", "themselves", "one",
    // question words
    "what", "which", "who", "whom", "whose", "when", "where", "why", "how",
    "whether",
    // prepositions and conjunctions
    "in", "on", "at", "by", "for", "from", "to", "of", "off", "with",
    "without", "into", "onto", "about", "above", "below", "under", "over",
    "after", "before", "between", "during", "since", "until", "through",
    "against", "among", "within", "as", "than", "and", "or", "but", "if",
    "so", "yet", "also", "then", "there", "here", "ever", "never", "only",
    "just", "more", "most", "less", "least", "other", "such", "same", "own",
    "very", "too", "again", "once", "while", "up", "down", "out",
    // auxiliaries
    "be", "is", "are", "was", "were", "been", "being", "am", "do", "does",
    "did", "done", "doing", "have", "has", "had", "having", "can", "could",
    "will", "would", "shall", "should", "may", "might", "must",
    // common verbs
    "run", "runs", "ran", "running", "select", "selects", "selected",
    "selecting", "choose", "chose", "chosen", "get", "got", "go", "went",
    "make", "made", "take", "took", "give", "gave", "show", "list", "find",
    "found", "tell", "say", "said", "see", "saw", "know", "become", "became",
    "represent", "represents", "represented", "register", "registered",
    "file", "filed", "serve", "served", "hold", "held", "win", "won", "lose",
    "lost", "seek", "sought", "appear", "appeared", "belong", "belonged",
};

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  // Bytes >= 0x80 belong to multi-byte UTF-8 letters; keep them.
  return u >= 0x80 || std::isalnum(u);
}

bool starts_uppercase(std::string_view s) {
  if (s.empty()) return false;
  const auto cps = text::decode_utf8(s.substr(0, std::min<std::size_t>(4, s.size())));
  if (cps.empty()) return false;
  return text::fold_case(cps.front()) != cps.front();
}

// Strips surrounding punctuation; keeps the trailing period of an initial
// ("M.") or dotted abbreviation ("U.S.").
std::string strip_punctuation(std::string_view word) {
  std::size_t begin = 0, end = word.size();
  while (begin < end && !is_word_char(word[begin])) ++begin;
  std::size_t core_end = end;
  while (core_end > begin && !is_word_char(word[core_end - 1])) --core_end;
  std::string core(word.substr(begin, core_end - begin));
  if (core.empty()) return core;
  const bool dotted = core_end < end && word[core_end] == '.';
  const bool initial = text::decode_utf8(core).size() == 1;
  const bool abbreviation = core.find('.') != std::string::npos;
  if (dotted && (initial || abbreviation)) core.push_back('.');
  return core;
}

std::vector<std::string> split_question(std::string_view question) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (char c : question) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '-') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return words;
}

}  // namespace

const std::unordered_set<std::string>&
LexiconKeywordExtractor::default_lexicon() {
  static const std::unordered_set<std::string> lexicon(std::begin(kLexicon),
                                                       std::end(kLexicon));
  return lexicon;
}

LexiconKeywordExtractor::LexiconKeywordExtractor()
    : lexicon_(default_lexicon()) {}

LexiconKeywordExtractor::LexiconKeywordExtractor(
    std::unordered_set<std::string> lexicon)
    : lexicon_(std::move(lexicon)) {}

KeywordSet LexiconKeywordExtractor::extract(std::string_view question) const {
  KeywordSet result;
  std::unordered_set<std::string> seen;
  bool first = true;
  for (const auto& raw : split_question(question)) {
    std::string word = strip_punctuation(raw);
    if (word.empty()) continue;
    const bool is_first = first;
    first = false;

    std::string lowered = text::fold_case_utf8(word);
    std::string bare = lowered;
    if (!bare.empty() && bare.back() == '.') bare.pop_back();

    const bool keep = has_digit(word) ||
                      (!is_first && starts_uppercase(word)) ||
                      !lexicon_.contains(bare);
    if (keep && seen.insert(lowered).second) {
      result.keywords.push_back(std::move(lowered));
    }
  }
  return result;
}

KeywordSet extract_keywords(std::string_view question_text,
                            const KeywordExtractor& extractor) {
  if (text::trim(question_text).empty()) {
    throw ValidationError("extract_keywords: empty question");
  }
  KeywordSet keywords;
  try {
    keywords = extractor.extract(question_text);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw RuntimeFailure("keyword extraction failed for question '" +
                         std::string(question_text) + "': " + e.what());
  }
  if (keywords.empty()) {
    throw ValidationError("no content words in question '" +
                          std::string(question_text) + "'");
  }
  return keywords;
}

namespace {

std::u32string prepare(std::string_view s, bool case_fold) {
  auto cps = text::decode_utf8(s);
  return case_fold ? text::fold_case(cps) : cps;
}

double confidence_of(const std::vector<std::u32string>& keywords,
                     const DocumentOcr& doc, bool case_fold) {
  if (doc.tokens.empty()) return 0.0;
  std::vector<std::u32string> words;
  words.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) words.push_back(prepare(t.text, case_fold));

  double total = 0.0;
  for (const auto& kw : keywords) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : words) {
      best = std::min(best, text::nld(kw, w));
      if (best == 0.0) break;
    }
    total += best;
  }
  return 1.0 - total / static_cast<double>(keywords.size());
}

std::vector<std::u32string> prepare_keywords(const KeywordSet& keywords,
                                             bool case_fold) {
  if (keywords.empty()) {
    throw std::invalid_argument("doc_confidence: empty keyword set");
  }
  std::vector<std::u32string> out;
  out.reserve(keywords.size());
  for (const auto& k : keywords.keywords) out.push_back(prepare(k, case_fold));
  return out;
}

}  // namespace

double doc_confidence(const KeywordSet& keywords, const DocumentOcr& doc,
                      bool case_fold) {
  return confidence_of(prepare_keywords(keywords, case_fold), doc, case_fold);
}

std::vector<RankedDoc> rank_collection(const KeywordSet& keywords,
                                       std::span<const DocumentOcr> docs,
                                       const TextspotOptions& options) {
  if (docs.empty()) throw ValidationError("rank_collection: empty collection");
  std::unordered_set<std::string_view> ids;
  for (const auto& d : docs) {
    if (!ids.insert(d.doc_id).second) {
      throw ValidationError("rank_collection: duplicate doc_id '" + d.doc_id +
                            "'");
    }
  }
  const auto kws = prepare_keywords(keywords, options.case_fold);
  std::vector<RankedDoc> ranking(docs.size());
  detail::parallel_for(docs.size(), options.threads, [&](std::size_t i) {
    ranking[i] = {docs[i].doc_id,
                  confidence_of(kws, docs[i], options.case_fold)};
  });
  sort_ranking(ranking);
  return ranking;
}

std::vector<std::string> threshold_relevant(std::span<const RankedDoc> ranking,
                                            double theta) {
  std::vector<std::string> out;
  for (const auto& d : ranking) {
    if (d.confidence > theta) out.push_back(d.doc_id);
  }
  return out;
}

}  // namespace colqa
