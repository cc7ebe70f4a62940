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

#ifndef COLQA_CONTEXT_HPP_
#define COLQA_CONTEXT_HPP_

#include <string>
#include <vector>

#include "colqa/textspot.hpp"

namespace colqa {

inline constexpr double kDefaultLineToleranceFactor = 0.5;

// Groups tokens into text lines: a token joins the current line when its
// vertical center is closer than factor x (median token height) to the
// line's mean center. Lines go top to bottom, tokens left to right.
std::vector<std::vector<Token>> group_lines(
    const DocumentOcr& doc, double line_tolerance_factor = kDefaultLineToleranceFactor);

// Token texts in reading order joined by single spaces; "" for an empty
// document.
std::string serialize_context(
    const DocumentOcr& doc, double line_tolerance_factor = kDefaultLineToleranceFactor);

}  // namespace colqa

#endif  // COLQA_CONTEXT_HPP_
