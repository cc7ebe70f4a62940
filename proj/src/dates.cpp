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

#include "colqa/dates.hpp"

#include <array>
#include <cstdio>
#include <regex>

#include "colqa/text.hpp"

namespace colqa {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

std::optional<unsigned> month_from_name(const std::string& name) {
  const std::string lowered = text::to_lower_ascii(name);
  for (unsigned i = 0; i < kMonthNames.size(); ++i) {
    const std::string full = kMonthNames[i];
    if (lowered == full) return i + 1;
    if (lowered.size() >= 3 && full.compare(0, lowered.size(), lowered) == 0) {
      return i + 1;  // "Jun", "Sept", ...
    }
  }
  return std::nullopt;
}

std::optional<Date> make_date(int y, unsigned m, unsigned d) {
  const Date date{std::chrono::year{y}, std::chrono::month{m},
                  std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

}  // namespace

std::optional<Date> parse_date(std::string_view input) {
  static const std::regex kUs(R"(^(\d{1,2})/(\d{1,2})/(\d{4})$)");
  static const std::regex kIso(R"(^(\d{4})-(\d{2})-(\d{2})$)");
  static const std::regex kLong(R"(^([A-Za-z]+)\.?\s+(\d{1,2}),?\s+(\d{4})$)");

  const std::string s = text::collapse_whitespace(input);
  std::smatch m;
  if (std::regex_match(s, m, kUs)) {
    return make_date(std::stoi(m[3]), static_cast<unsigned>(std::stoi(m[1])),
                     static_cast<unsigned>(std::stoi(m[2])));
  }
  if (std::regex_match(s, m, kIso)) {
    return make_date(std::stoi(m[1]), static_cast<unsigned>(std::stoi(m[2])),
                     static_cast<unsigned>(std::stoi(m[3])));
  }
  if (std::regex_match(s, m, kLong)) {
    const auto month = month_from_name(m[1]);
    if (!month) return std::nullopt;
    return make_date(std::stoi(m[3]), *month,
                     static_cast<unsigned>(std::stoi(m[2])));
  }
  return std::nullopt;
}

std::string format_iso(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_us(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02u/%02u/%04d",
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()), static_cast<int>(d.year()));
  return buf;
}

std::string format_long(const Date& d) {
  std::string month = kMonthNames[static_cast<unsigned>(d.month()) - 1];
  month[0] = static_cast<char>(month[0] - 'a' + 'A');
  return month + " " + std::to_string(static_cast<unsigned>(d.day())) + ", " +
         std::to_string(static_cast<int>(d.year()));
}

int year_of(const Date& d) { return static_cast<int>(d.year()); }

}  // namespace colqa
