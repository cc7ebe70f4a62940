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

#ifndef COLQA_TEXT_HPP_
#define COLQA_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace colqa::text {

// Decodes UTF-8 into code points. Malformed sequences become U+FFFD, one per
// offending byte, so decoding never fails.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Simple case folding: ASCII and the Latin-1 Supplement letters.
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view s);
std::string fold_case_utf8(std::string_view s);

// Unit-cost Levenshtein distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// Normalized Levenshtein similarity: 1 - dist / max(|a|, |b|), and 1 when
// both strings are empty.
double nls(std::string_view a, std::string_view b, bool case_fold = true);
double nls(std::u32string_view a, std::u32string_view b);

// Normalized Levenshtein distance, 1 - nls.
double nld(std::string_view a, std::string_view b, bool case_fold = true);
double nld(std::u32string_view a, std::u32string_view b);

std::string trim(std::string_view s);
// Trims and replaces every run of whitespace with a single space.
std::string collapse_whitespace(std::string_view s);
std::string to_lower_ascii(std::string_view s);

}  // namespace colqa::text

#endif  // COLQA_TEXT_HPP_
