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

#ifndef COLQA_DATES_HPP_
#define COLQA_DATES_HPP_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace colqa {

using Date = std::chrono::year_month_day;

// Accepts MM/DD/YYYY, M/D/YYYY, YYYY-MM-DD and "Month D, YYYY" (full or
// abbreviated month name, any case). Returns nullopt unless the result is a
// valid calendar date.
std::optional<Date> parse_date(std::string_view s);

// YYYY-MM-DD.
std::string format_iso(const Date& d);
// MM/DD/YYYY.
std::string format_us(const Date& d);
// "Month D, YYYY".
std::string format_long(const Date& d);

int year_of(const Date& d);

}  // namespace colqa

#endif  // COLQA_DATES_HPP_
