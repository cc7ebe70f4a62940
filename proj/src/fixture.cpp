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

#include "colqa/fixture.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>

#include <spdlog/spdlog.h>

#include "colqa/errors.hpp"
#include "colqa/records.hpp"
#include "colqa/text.hpp"

namespace colqa {

namespace {

namespace chr = std::chrono;

constexpr const char* kName = "candidate_name";
constexpr const char* kParty = "party";
constexpr const char* kOffice = "office";
constexpr const char* kCity = "candidate_city";
constexpr const char* kCounty = "candidate_county";
constexpr const char* kDate = "election_date";
constexpr const char* kReporting = "reporting_option";
constexpr const char* kTreasurer = "treasurer_name";

constexpr double kReferenceDocs = 14362.0;

// mt19937_64's output sequence is fixed by the standard; the distributions
// are not, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t index(std::size_t n) {
    const std::uint64_t range = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

const std::vector<std::string> kFirstNames = {
    "Anna",    "Gary",   "Danielle", "Valerie", "Suzanne", "Stanley", "Dean",
    "Douglas", "Maria",  "James",    "Linda",   "Robert",  "Karen",   "Michael",
    "Susan",   "David",  "Laura",    "Thomas",  "Nancy",   "Steven",  "Carol",
    "Daniel",  "Helen",  "Kevin",    "Sharon",  "Brian",   "Donna",   "Ronald",
    "Ruth",    "Edward", "Alice",    "Peter",   "Joyce",   "Frank",   "Diane",
    "Gregory", "Janet",  "Henry",    "Martha",  "Paul",    "Teresa",  "Walter",
    "Gloria",  "Arthur", "Evelyn",   "Harold",  "Rose",    "Carl",    "Irene",
    "Roger",   "Judith", "Victor",   "Wanda",   "Eugene",  "Leslie",  "Russell",
    "Norma",   "Philip", "Marilyn",  "Howard"};

const std::vector<std::string> kLastNames = {
    "Rivers",    "Schoessler", "Westbrook", "Quill",     "Skaar",
    "Rumbaugh",  "Takko",      "Fair",      "Anderson",  "Baker",
    "Carter",    "Dawson",     "Ellison",   "Fischer",   "Garrison",
    "Holloway",  "Ingram",     "Jensen",    "Keller",    "Lindqvist",
    "Morrison",  "Nakamura",   "Olsen",     "Peterson",  "Quintana",
    "Rasmussen", "Sorensen",   "Thornton",  "Underwood", "Vasquez",
    "Whitaker",  "Yamamoto",   "Zimmerman", "Abbott",    "Bennett",
    "Chandler",  "Donovan",    "Everett",   "Fletcher",  "Gallagher",
    "Hartley",   "Iverson",    "Jorgensen", "Kowalski",  "Lambert",
    "Mendoza",   "Norris",     "Osborne",   "Prescott",  "Ramsey",
    "Sullivan",  "Tanaka",     "Vaughn",    "Wheeler",   "Young",
    "Aldridge",  "Barlow",     "Crawford",  "Delgado",   "Emerson",
    "Fairbanks", "Goodwin",    "Hawkins",   "Jacobsen",  "Kimball",
    "Langley",   "Maddox",     "Newell",    "Oakley",    "Pruitt",
    "Redding",   "Stafford",   "Talbot",    "Upton",     "Vance",
    "Whitfield", "Yates",      "Zeller",    "Brandt",    "Castillo"};

const std::vector<std::string> kOffices = {
    "State Representative", "State Senator", "County Commissioner",
    "Superior Court Judge", "City Council Member", "District Court Judge",
    "Mayor", "School Director", "Port Commissioner", "Fire Commissioner",
    "County Assessor", "County Auditor", "County Clerk", "County Sheriff",
    "County Treasurer", "Prosecuting Attorney",
    "Public Utility District Commissioner", "Hospital District Commissioner",
    "Water District Commissioner", "Park District Commissioner", "Governor",
    "Lieutenant Governor", "Attorney General", "State Treasurer",
    "State Auditor", "Insurance Commissioner"};

const std::vector<std::string> kPositionOffices = {
    "City Council Member", "School Director", "Port Commissioner",
    "Fire Commissioner", "County Commissioner", "Superior Court Judge",
    "District Court Judge"};

const std::vector<std::string> kCities = {
    "Seattle",       "Spokane",      "Tacoma",          "Vancouver",
    "Bellevue",      "Kent",         "Everett",         "Renton",
    "Yakima",        "Spokane Valley", "Federal Way",   "Kirkland",
    "Bellingham",    "Kennewick",    "Auburn",          "Pasco",
    "Marysville",    "Lakewood",     "Redmond",         "Shoreline",
    "Richland",      "Sammamish",    "Burien",          "Olympia",
    "Lacey",         "Edmonds",      "Bremerton",       "Puyallup",
    "Longview",      "Lynnwood",     "Wenatchee",       "Mount Vernon",
    "Walla Walla",   "Pullman",      "Des Moines",      "Lake Stevens",
    "Issaquah",      "Mukilteo",     "Bothell",         "Tukwila",
    "Anacortes",     "Ellensburg",   "Port Angeles",    "Centralia",
    "Camas",         "Moses Lake",   "Oak Harbor",      "Sunnyside",
    "Aberdeen",      "Port Townsend", "North Bonneville", "Ocean Shores",
    "Chelan",        "Omak",         "Colville",        "Sequim",
    "Hoquiam",       "Shelton",      "Toppenish",       "Forks"};

const std::vector<std::string> kCityPrefixes = {
    "North", "South", "East", "West", "Lake", "Port", "Glen", "Cedar", "Pine",
    "Elm"};
const std::vector<std::string> kCitySuffixes = {
    "wood", "field", "ton", "dale", "view", "brook", "ridge", "haven", "crest",
    "ford"};
const std::vector<std::string> kCityQualifiers = {"", " Heights", " Springs",
                                                  " Falls", " Park"};

const std::vector<std::string> kCounties = {
    "Adams",     "Asotin",    "Benton",    "Chelan",       "Clallam",
    "Clark",     "Columbia",  "Cowlitz",   "Douglas",      "Ferry",
    "Franklin",  "Garfield",  "Grant",     "Grays Harbor", "Island",
    "Jefferson", "King",      "Kitsap",    "Kittitas",     "Klickitat",
    "Lewis",     "Lincoln",   "Mason",     "Okanogan",     "Pacific",
    "Pend Oreille", "Pierce", "San Juan",  "Skagit",       "Skamania",
    "Snohomish", "Spokane",   "Stevens",   "Thurston",     "Wahkiakum",
    "Walla Walla", "Whatcom", "Whitman",   "Yakima"};

constexpr std::size_t kMaxElectionDates = 200;

std::vector<std::string> office_pool() {
  std::vector<std::string> pool = kOffices;
  for (int pos = 1; pos <= 9; ++pos) {
    for (const auto& t : kPositionOffices) {
      pool.push_back(t + " Pos. " + std::to_string(pos));
    }
  }
  return pool;
}

std::vector<std::string> city_pool() {
  std::vector<std::string> pool = kCities;
  for (const auto& q : kCityQualifiers) {
    for (const auto& p : kCityPrefixes) {
      for (const auto& s : kCitySuffixes) pool.push_back(p + s + q);
    }
  }
  return pool;
}

// Election days from 2008 on: the first Tuesday of August (primary) and the
// Tuesday after the first Monday of November (general).
std::vector<Date> election_date_pool(std::size_t count) {
  std::vector<Date> out;
  for (int y = 2008; out.size() < count; ++y) {
    const chr::year year{y};
    const chr::sys_days primary{year / chr::August / chr::Tuesday[1]};
    const chr::sys_days general{
        chr::sys_days{year / chr::November / chr::Monday[1]} + chr::days{1}};
    out.emplace_back(primary);
    if (out.size() < count) out.emplace_back(general);
  }
  return out;
}

std::string to_upper_ascii(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string format_us_unpadded(const Date& d) {
  return std::to_string(static_cast<unsigned>(d.month())) + "/" +
         std::to_string(static_cast<unsigned>(d.day())) + "/" +
         std::to_string(static_cast<int>(d.year()));
}

Date shift(const Date& d, int days) {
  return Date{chr::sys_days{d} + chr::days{days}};
}

// Canonical (noise-free) values of one generated record.
struct CanonRecord {
  std::string doc_id;
  std::map<std::string, std::string> text;  // text fields + checkbox label
  std::optional<Date> date;

  const std::string* get(const std::string& field) const {
    const auto it = text.find(field);
    return it == text.end() ? nullptr : &it->second;
  }
  bool has(const std::string& field) const {
    return field == kDate ? date.has_value() : text.contains(field);
  }
};

std::vector<std::string> distinct_names(Rng& rng, std::size_t count) {
  const std::size_t space = kFirstNames.size() * 26 * kLastNames.size();
  std::set<std::size_t> used;
  std::vector<std::string> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::size_t k = rng.index(space);
    if (!used.insert(k).second) continue;
    const std::size_t first = k % kFirstNames.size();
    const std::size_t initial = (k / kFirstNames.size()) % 26;
    const std::size_t last = k / (kFirstNames.size() * 26);
    out.push_back(kFirstNames[first] + " " + static_cast<char>('A' + initial) +
                  ". " + kLastNames[last]);
  }
  return out;
}

std::size_t pool_limit(const std::string& field, const Schema& schema) {
  if (field == kName || field == kTreasurer) {
    return kFirstNames.size() * 26 * kLastNames.size();
  }
  if (field == kParty || field == kReporting) {
    return schema.at(field).vocabulary.size();
  }
  if (field == kOffice) return office_pool().size();
  if (field == kCity) return city_pool().size();
  if (field == kCounty) return kCounties.size();
  if (field == kDate) return kMaxElectionDates;
  return 0;
}

std::size_t cardinality(const FixtureSpec& spec, const std::string& field) {
  const auto it = spec.field_cardinalities.find(field);
  return it != spec.field_cardinalities.end()
             ? it->second
             : default_cardinality(field, spec.n_docs);
}

double missing_rate(const FixtureSpec& spec, const std::string& field) {
  const auto it = spec.missing_rates.find(field);
  return it != spec.missing_rates.end() ? it->second
                                        : default_missing_rate(field);
}

// Assigns value indices in [0, card) to the present records of one field so
// that every value occurs at least once.
std::vector<std::optional<std::size_t>> assign_values(Rng& rng, std::size_t n,
                                                      std::size_t card,
                                                      double missing) {
  std::vector<bool> present(n);
  std::size_t n_present = 0;
  for (std::size_t i = 0; i < n; ++i) {
    present[i] = !rng.chance(missing);
    n_present += present[i];
  }
  for (std::size_t i = 0; i < n && n_present < card; ++i) {
    if (!present[i]) {
      present[i] = true;
      ++n_present;
    }
  }
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < n; ++i) {
    if (present[i]) slots.push_back(i);
  }
  rng.shuffle(slots);
  std::vector<std::optional<std::size_t>> out(n);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    out[slots[k]] = k < card ? k : rng.index(card);
  }
  return out;
}

// --- layout -----------------------------------------------------------------

constexpr double kPageWidth = 850, kPageHeight = 1100;
constexpr double kLeft = 40, kTop = 60, kLineStep = 40, kTokenHeight = 20;
constexpr double kCharWidth = 10, kGap = 10;

class PageWriter {
 public:
  explicit PageWriter(DocumentOcr& doc) : doc_(doc) {}

  void line(const std::vector<std::string>& words) {
    double x = kLeft;
    const double y = kTop + kLineStep * static_cast<double>(line_++);
    for (const auto& w : words) {
      const double width =
          kCharWidth * static_cast<double>(text::decode_utf8(w).size());
      doc_.tokens.push_back({w, {x, y, std::min(x + width, kPageWidth), y + kTokenHeight}, {}});
      x = std::min(x + width + kGap, kPageWidth);
    }
  }

 private:
  DocumentOcr& doc_;
  int line_ = 0;
};

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

DocumentOcr render_document(const RawRecord& record) {
  DocumentOcr doc;
  doc.doc_id = record.doc_id;
  doc.page_size = PageSize{kPageWidth, kPageHeight};
  PageWriter page(doc);
  page.line({"CANDIDATE", "REGISTRATION"});
  auto field_line = [&](std::vector<std::string> label, const char* field) {
    if (const auto it = record.fields.find(field); it != record.fields.end()) {
      for (auto& w : split_words(it->second.raw)) label.push_back(std::move(w));
    }
    page.line(label);
  };
  field_line({"Candidate", "Name:"}, kName);
  field_line({"Party:"}, kParty);
  field_line({"Office", "Sought:"}, kOffice);
  field_line({"City:"}, kCity);
  field_line({"County:"}, kCounty);
  field_line({"Election", "Date:"}, kDate);
  {
    std::vector<std::string> words = {"Reporting", "Option:"};
    const auto it = record.fields.find(kReporting);
    const std::string selected =
        it == record.fields.end() ? "" : text::to_lower_ascii(it->second.raw);
    for (const char* option : {"Mini", "Full"}) {
      words.push_back(option);
      words.push_back(selected == text::to_lower_ascii(option) ? "[X]" : "[_]");
    }
    page.line(words);
  }
  field_line({"Treasurer", "Name:"}, kTreasurer);
  return doc;
}

// --- questions ---------------------------------------------------------------

std::string us_date(const Date& d) { return format_us(d); }

bool canon_matches(const CanonRecord& r, const Constraint& c) {
  const bool negative = c.op == ConstraintOp::kNeq || c.op == ConstraintOp::kNotIn;
  if (c.field == kDate) {
    if (!r.date) return negative;
    const Date d = *r.date;
    std::vector<Date> vals;
    if (c.op != ConstraintOp::kDateYearEq) {
      for (const auto& v : c.values) vals.push_back(*parse_date(v));
    }
    switch (c.op) {
      case ConstraintOp::kEq:
      case ConstraintOp::kIn:
        return std::find(vals.begin(), vals.end(), d) != vals.end();
      case ConstraintOp::kNeq:
      case ConstraintOp::kNotIn:
        return std::find(vals.begin(), vals.end(), d) == vals.end();
      case ConstraintOp::kDateBefore:
        return d < vals[0];
      case ConstraintOp::kDateAfter:
        return d > vals[0];
      case ConstraintOp::kDateBetween:
        return vals[0] <= d && d <= vals[1];
      case ConstraintOp::kDateYearEq:
        return year_of(d) == std::stoi(c.values[0]);
      default:
        return false;
    }
  }
  const std::string* v = r.get(c.field);
  if (c.op == ConstraintOp::kCheckedEq) {
    // Generated checkboxes are always ticked.
    return v != nullptr && c.values[0] == "true";
  }
  if (!v) return negative;
  const bool hit = std::find(c.values.begin(), c.values.end(), *v) != c.values.end();
  return negative ? !hit : hit;
}

struct Template {
  // Fields the anchor record must have.
  std::vector<const char*> needs;
  std::function<std::optional<Question>(const CanonRecord&, Rng&)> make;
};

Constraint eq(const char* field, std::string value) {
  return {field, ConstraintOp::kEq, {std::move(value)}};
}

std::vector<std::string> other_parties(const std::vector<std::string>& parties,
                                       const std::string* exclude, Rng& rng,
                                       std::size_t count) {
  std::vector<std::string> pool;
  for (const auto& p : parties) {
    if (!exclude || p != *exclude) pool.push_back(p);
  }
  if (pool.size() < count) return {};
  rng.shuffle(pool);
  pool.resize(count);
  return pool;
}

std::vector<Template> make_templates(const std::vector<std::string>& parties) {
  std::vector<Template> t;
  auto q = [](std::string text, std::vector<Constraint> cs, std::string answer,
              AnswerFormat fmt = AnswerFormat::kDate) {
    Question out;
    out.text = std::move(text);
    StructuredQuery sq;
    sq.constraints = std::move(cs);
    sq.answer_field = std::move(answer);
    sq.answer_format = fmt;
    out.query = std::move(sq);
    return std::optional<Question>(std::move(out));
  };

  // party + year
  t.push_back({{kParty, kDate}, [=](const CanonRecord& r, Rng&) {
                 const std::string year = std::to_string(year_of(*r.date));
                 const std::string& party = *r.get(kParty);
                 return q("Which candidates in " + year + " were from the " +
                              party + " party?",
                          {eq(kParty, party),
                           {kDate, ConstraintOp::kDateYearEq, {year}}},
                          kName);
               }});
  // office + date range (endpoints sometimes exactly on the anchor date)
  t.push_back({{kOffice, kDate}, [=](const CanonRecord& r, Rng& rng) {
                 const int lo = rng.chance(0.5) ? 0 : 1 + static_cast<int>(rng.index(300));
                 const int hi = rng.chance(0.5) ? 0 : 1 + static_cast<int>(rng.index(300));
                 const Date from = shift(*r.date, -lo), to = shift(*r.date, hi);
                 const std::string& office = *r.get(kOffice);
                 return q("Which candidates ran for the " + office +
                              " office between " + us_date(from) + " and " +
                              us_date(to) + "?",
                          {eq(kOffice, office),
                           {kDate, ConstraintOp::kDateBetween,
                            {us_date(from), us_date(to)}}},
                          kName);
               }});
  // name + office -> county
  t.push_back({{kName, kOffice, kCounty}, [=](const CanonRecord& r, Rng&) {
                 return q("In which legislative counties did " + *r.get(kName) +
                              " run for " + *r.get(kOffice) + "?",
                          {eq(kName, *r.get(kName)), eq(kOffice, *r.get(kOffice))},
                          kCounty);
               }});
  // treasurer
  t.push_back({{kTreasurer}, [=](const CanonRecord& r, Rng&) {
                 return q("For which candidates was " + *r.get(kTreasurer) +
                              " the treasurer?",
                          {eq(kTreasurer, *r.get(kTreasurer))}, kName);
               }});
  // city + neither of two parties
  t.push_back({{kCity}, [=](const CanonRecord& r, Rng& rng) -> std::optional<Question> {
                 const auto others = other_parties(parties, r.get(kParty), rng, 2);
                 if (others.empty()) return std::nullopt;
                 return q("Which candidates ran for election in " + *r.get(kCity) +
                              " who were from neither the " + others[0] +
                              " nor " + others[1] + " parties?",
                          {eq(kCity, *r.get(kCity)),
                           {kParty, ConstraintOp::kNotIn, others}},
                          kName);
               }});
  // yes/no on the selected reporting option
  t.push_back({{kName, kDate, kReporting}, [=](const CanonRecord& r, Rng&) {
                 const std::string& option = *r.get(kReporting);
                 return q("Did " + *r.get(kName) + " select the " +
                              text::to_lower_ascii(option) +
                              " reporting option when running for the " +
                              us_date(*r.date) + " elections?",
                          {eq(kName, *r.get(kName)), eq(kDate, us_date(*r.date)),
                           eq(kReporting, option)},
                          std::string(kYesNoAnswer));
               }});
  // any of three parties + city
  t.push_back({{kParty, kCity}, [=](const CanonRecord& r, Rng& rng) -> std::optional<Question> {
                 auto others = other_parties(parties, r.get(kParty), rng, 2);
                 if (others.empty()) return std::nullopt;
                 std::vector<std::string> set = {others[0], others[1], *r.get(kParty)};
                 rng.shuffle(set);
                 return q("Which candidates from the " + set[0] + ", " + set[1] +
                              ", or " + set[2] + " parties ran for election in " +
                              *r.get(kCity) + "?",
                          {{kParty, ConstraintOp::kIn, set}, eq(kCity, *r.get(kCity))},
                          kName);
               }});
  // yes/no: ever ran for an office
  t.push_back({{kName, kOffice}, [=](const CanonRecord& r, Rng&) {
                 return q("Did " + *r.get(kName) + " ever run for " +
                              *r.get(kOffice) + "?",
                          {eq(kName, *r.get(kName)), eq(kOffice, *r.get(kOffice))},
                          std::string(kYesNoAnswer));
               }});
  // election years for a candidate and office
  t.push_back({{kName, kOffice, kDate}, [=](const CanonRecord& r, Rng&) {
                 return q("In which years did " + *r.get(kName) + " run for the " +
                              *r.get(kOffice) + " office?",
                          {eq(kName, *r.get(kName)), eq(kOffice, *r.get(kOffice))},
                          kDate, AnswerFormat::kYear);
               }});
  // after a date + party
  t.push_back({{kParty, kDate}, [=](const CanonRecord& r, Rng& rng) {
                 const Date after = shift(*r.date, -1 - static_cast<int>(rng.index(400)));
                 return q("Which candidates running after " + us_date(after) +
                              " were from the " + *r.get(kParty) + " party?",
                          {{kDate, ConstraintOp::kDateAfter, {us_date(after)}},
                           eq(kParty, *r.get(kParty))},
                          kName);
               }});
  // reporting option for name + office + city
  t.push_back({{kName, kOffice, kCity, kReporting}, [=](const CanonRecord& r, Rng&) {
                 return q("Which reporting option did " + *r.get(kName) +
                              " select when running for " + *r.get(kOffice) +
                              " in " + *r.get(kCity) + "? Mini or full?",
                          {eq(kName, *r.get(kName)), eq(kOffice, *r.get(kOffice)),
                           eq(kCity, *r.get(kCity))},
                          kReporting);
               }});
  // before a date + office
  t.push_back({{kOffice, kDate}, [=](const CanonRecord& r, Rng& rng) {
                 const Date before = shift(*r.date, 1 + static_cast<int>(rng.index(400)));
                 return q("Which candidates ran for " + *r.get(kOffice) +
                              " before " + us_date(before) + "?",
                          {eq(kOffice, *r.get(kOffice)),
                           {kDate, ConstraintOp::kDateBefore, {us_date(before)}}},
                          kName);
               }});
  // city + not one party
  t.push_back({{kCity}, [=](const CanonRecord& r, Rng& rng) -> std::optional<Question> {
                 const auto others = other_parties(parties, r.get(kParty), rng, 1);
                 if (others.empty()) return std::nullopt;
                 return q("Which candidates from " + *r.get(kCity) +
                              " are not from the " + others[0] + " party?",
                          {eq(kCity, *r.get(kCity)),
                           {kParty, ConstraintOp::kNeq, {others[0]}}},
                          kName);
               }});
  // office + ticked reporting option
  t.push_back({{kOffice, kReporting}, [=](const CanonRecord& r, Rng&) {
                 return q("Which candidates for " + *r.get(kOffice) +
                              " marked a reporting option?",
                          {eq(kOffice, *r.get(kOffice)),
                           {kReporting, ConstraintOp::kCheckedEq, {"true"}}},
                          kName);
               }});
  return t;
}

AnswerList canon_answers(const StructuredQuery& q,
                         const std::vector<const CanonRecord*>& relevant) {
  if (q.is_yes_no()) return relevant.empty() ? AnswerList{"No"} : AnswerList{"Yes"};
  std::set<std::string> out;
  for (const auto* r : relevant) {
    if (q.answer_field == kDate) {
      if (r->date) {
        out.insert(q.answer_format == AnswerFormat::kYear
                       ? std::to_string(year_of(*r->date))
                       : format_iso(*r->date));
      }
    } else if (const auto* v = r->get(q.answer_field)) {
      out.insert(*v);
    }
  }
  return {out.begin(), out.end()};
}

std::string question_id(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%03zu", n);
  return buf;
}

}  // namespace

std::size_t default_cardinality(const std::string& field, std::size_t n_docs) {
  auto scaled = [&](double unique) {
    const double v = std::round(static_cast<double>(n_docs) * unique / kReferenceDocs);
    return std::max<std::size_t>(1, static_cast<std::size_t>(v));
  };
  if (field == kName) return scaled(9309);
  if (field == kTreasurer) return scaled(10197);
  if (field == kCity) return scaled(476);
  std::size_t fixed = 1;
  if (field == kParty) fixed = 10;
  if (field == kOffice) fixed = 43;
  if (field == kCounty) fixed = 39;
  if (field == kDate) fixed = 27;
  if (field == kReporting) fixed = 2;
  return std::min(fixed, std::max<std::size_t>(1, n_docs));
}

double default_missing_rate(const std::string& field) {
  if (field == kParty) return (kReferenceDocs - 14161) / kReferenceDocs;
  if (field == kCity) return (kReferenceDocs - 14361) / kReferenceDocs;
  if (field == kCounty) return (kReferenceDocs - 14343) / kReferenceDocs;
  if (field == kReporting) return (kReferenceDocs - 14357) / kReferenceDocs;
  return 0.0;
}

void validate_fixture_spec(const FixtureSpec& spec) {
  if (spec.n_docs == 0) throw ValidationError("fixture: n_docs must be positive");
  const Schema schema = Schema::candidate_registration();
  for (const auto& [field, card] : spec.field_cardinalities) {
    if (!schema.find(field)) {
      throw ValidationError("fixture: unknown field '" + field + "'");
    }
    if (card < 1) {
      throw ValidationError("fixture: cardinality of '" + field + "' must be >= 1");
    }
  }
  for (const auto& [field, rate] : spec.missing_rates) {
    if (!schema.find(field)) {
      throw ValidationError("fixture: unknown field '" + field + "'");
    }
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ValidationError("fixture: missing rate of '" + field +
                            "' must lie in [0, 1]");
    }
  }
  for (const auto& f : schema.fields()) {
    const std::size_t card = cardinality(spec, f.name);
    if (card > spec.n_docs) {
      throw ValidationError("fixture: '" + f.name + "' needs " +
                            std::to_string(card) + " distinct values but there are only " +
                            std::to_string(spec.n_docs) + " documents");
    }
    if (card > pool_limit(f.name, schema)) {
      throw ValidationError("fixture: at most " +
                            std::to_string(pool_limit(f.name, schema)) +
                            " distinct values available for '" + f.name + "'");
    }
  }
}

Fixture generate_fixture(const FixtureSpec& spec) {
  validate_fixture_spec(spec);
  Fixture fx;
  fx.schema = Schema::candidate_registration();
  Rng rng(spec.seed);
  const std::size_t n = spec.n_docs;

  // Distinct value pools per field.
  std::map<std::string, std::vector<std::string>> pools;
  pools[kName] = distinct_names(rng, cardinality(spec, kName));
  pools[kTreasurer] = distinct_names(rng, cardinality(spec, kTreasurer));
  {
    auto take = [&](std::vector<std::string> all, std::size_t card) {
      rng.shuffle(all);
      all.resize(card);
      return all;
    };
    pools[kOffice] = take(office_pool(), cardinality(spec, kOffice));
    pools[kCity] = take(city_pool(), cardinality(spec, kCity));
    pools[kCounty] = take(kCounties, cardinality(spec, kCounty));
    const auto& party_vocab = fx.schema.at(kParty).vocabulary;
    pools[kParty].assign(party_vocab.begin(),
                         party_vocab.begin() + static_cast<long>(cardinality(spec, kParty)));
    const auto& rep_vocab = fx.schema.at(kReporting).vocabulary;
    pools[kReporting].assign(rep_vocab.begin(),
                             rep_vocab.begin() + static_cast<long>(cardinality(spec, kReporting)));
  }
  const std::vector<Date> dates = election_date_pool(cardinality(spec, kDate));

  std::vector<CanonRecord> canon(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05zu", i + 1);
    canon[i].doc_id = buf;
  }
  for (const auto& f : fx.schema.fields()) {
    const std::size_t card = cardinality(spec, f.name);
    const auto assigned = assign_values(rng, n, card, missing_rate(spec, f.name));
    for (std::size_t i = 0; i < n; ++i) {
      if (!assigned[i]) continue;
      if (f.kind == FieldKind::kDate) {
        canon[i].date = dates[*assigned[i]];
      } else {
        canon[i].text[f.name] = pools.at(f.name)[*assigned[i]];
      }
    }
  }

  // Raw key-value output: mixed case text, dates in any accepted format.
  for (const auto& c : canon) {
    RawRecord raw;
    raw.doc_id = c.doc_id;
    for (const auto& f : fx.schema.fields()) {
      if (!c.has(f.name)) continue;
      RawField rf;
      rf.kind = f.kind;
      if (f.kind == FieldKind::kDate) {
        switch (rng.index(4)) {
          case 0:
            rf.raw = format_us(*c.date);
            break;
          case 1:
            rf.raw = format_us_unpadded(*c.date);
            break;
          case 2:
            rf.raw = format_iso(*c.date);
            break;
          default:
            rf.raw = format_long(*c.date);
        }
      } else {
        const std::string& v = *c.get(f.name);
        rf.raw = rng.chance(0.3) ? to_upper_ascii(v) : v;
        if (f.kind == FieldKind::kCheckbox) rf.checked = true;
      }
      raw.fields.emplace(f.name, std::move(rf));
    }
    fx.documents.push_back(render_document(raw));
    fx.records.push_back(std::move(raw));
  }

  // Questions anchored on random records, so every one has evidence.
  const auto templates = make_templates(pools[kParty]);
  std::size_t next_id = 1;
  for (const auto& tpl : templates) {
    for (std::size_t k = 0; k < spec.questions_per_template; ++k) {
      std::optional<Question> question;
      for (int attempt = 0; attempt < 1000 && !question; ++attempt) {
        const CanonRecord& anchor = canon[rng.index(n)];
        if (!std::all_of(tpl.needs.begin(), tpl.needs.end(),
                         [&](const char* f) { return anchor.has(f); })) {
          continue;
        }
        question = tpl.make(anchor, rng);
      }
      if (!question) {
        spdlog::warn("fixture: no anchor record for a question template");
        continue;
      }
      question->question_id = question_id(next_id++);
      question->query->question_id = question->question_id;

      GroundTruthEntry entry;
      entry.question_id = question->question_id;
      std::vector<const CanonRecord*> relevant;
      for (const auto& c : canon) {
        if (std::all_of(question->query->constraints.begin(),
                        question->query->constraints.end(),
                        [&](const Constraint& con) { return canon_matches(c, con); })) {
          relevant.push_back(&c);
          entry.relevant_doc_ids.insert(c.doc_id);
        }
      }
      entry.answers = canon_answers(*question->query, relevant);
      fx.gt.push_back(std::move(entry));
      fx.questions.push_back(std::move(*question));
    }
  }
  return fx;
}

void save_fixture(const std::filesystem::path& dir, const Fixture& fixture) {
  save_documents(dir / kDocumentsFile, fixture.documents);
  save_raw_records(dir / kRecordsFile, fixture.records);
  save_schema(dir / kSchemaFile, fixture.schema);
  save_questions(dir / kQuestionsFile, fixture.questions);
  save_gt(dir / kGroundTruthFile, fixture.gt);
}

NoiseReport inject_answer_noise(Fixture& fixture, double rate,
                                std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ValidationError("noise rate must lie in [0, 1]");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < fixture.records.size(); ++i) {
    index.emplace(fixture.records[i].doc_id, i);
  }
  std::vector<RecordDoc> normalized;
  normalized.reserve(fixture.records.size());
  for (const auto& r : fixture.records) {
    normalized.push_back(normalize_record(r, fixture.schema));
  }

  std::set<std::pair<std::size_t, std::string>> answer_fields, eligible;
  for (std::size_t qi = 0; qi < fixture.questions.size() && qi < fixture.gt.size(); ++qi) {
    const auto& q = fixture.questions[qi];
    if (!q.query || q.query->is_yes_no()) continue;
    const std::string& field = q.query->answer_field;
    const FieldSpec& spec = fixture.schema.at(field);
    for (const auto& id : fixture.gt[qi].relevant_doc_ids) {
      const auto it = index.find(id);
      if (it == index.end()) continue;
      const auto& fields = fixture.records[it->second].fields;
      if (!fields.contains(field)) continue;
      answer_fields.emplace(it->second, field);
      if (spec.kind == FieldKind::kText && spec.vocabulary.empty()) {
        eligible.emplace(it->second, field);
      }
    }
  }

  NoiseReport report;
  report.answer_fields = answer_fields.size();
  report.target = static_cast<std::size_t>(
      std::llround(rate * static_cast<double>(answer_fields.size())));

  Rng rng(seed);
  std::vector<std::pair<std::size_t, std::string>> candidates(eligible.begin(),
                                                              eligible.end());
  rng.shuffle(candidates);
  for (const auto& [ri, field] : candidates) {
    if (report.injected >= report.target) break;
    RawRecord& raw = fixture.records[ri];
    std::string& value = raw.fields.at(field).raw;
    std::vector<std::size_t> letters;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (std::isalpha(static_cast<unsigned char>(value[i]))) letters.push_back(i);
    }
    if (letters.empty()) continue;
    const std::size_t pos = letters[rng.index(letters.size())];
    const char original = value[pos];
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(original)));
    char replacement = static_cast<char>('a' + rng.index(25));
    if (replacement >= lower) ++replacement;  // skip the original letter
    if (std::isupper(static_cast<unsigned char>(original))) {
      replacement = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement)));
    }
    value[pos] = replacement;

    const RecordDoc noisy = normalize_record(raw, fixture.schema);
    const bool retrieval_kept = std::all_of(
        fixture.questions.begin(), fixture.questions.end(), [&](const Question& q) {
          return !q.query || matches(noisy, *q.query) == matches(normalized[ri], *q.query);
        });
    if (!retrieval_kept) {
      value[pos] = original;
      continue;
    }
    normalized[ri] = noisy;
    ++report.injected;
  }
  return report;
}

}  // namespace colqa
