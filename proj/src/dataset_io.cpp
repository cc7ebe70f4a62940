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

#include "colqa/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "colqa/errors.hpp"
#include "colqa/text.hpp"

namespace colqa {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw RuntimeFailure(path.string() + ": write failed");
}

namespace {

// A JSON value plus where it came from, for error messages.
class Node {
 public:
  Node(const ordered_json& value, std::string file, std::string path)
      : value_(value), file_(std::move(file)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& reason) const {
    throw ValidationError(file_ + ": at " + (path_.empty() ? "/" : path_) +
                          ": " + reason);
  }

  const ordered_json& json() const { return value_; }
  const std::string& path() const { return path_; }

  const Node& expect_object() const {
    if (!value_.is_object()) fail("expected an object");
    return *this;
  }

  std::vector<Node> items() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Node> out;
    out.reserve(value_.size());
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], file_, path_ + "/" + std::to_string(i));
    }
    return out;
  }

  bool has(const char* key) const {
    return value_.is_object() && value_.contains(key) && !value_[key].is_null();
  }

  Node at(const char* key) const {
    expect_object();
    const auto it = value_.find(key);
    if (it == value_.end()) fail(std::string("missing field \"") + key + "\"");
    return Node(*it, file_, path_ + "/" + key);
  }

  std::optional<Node> find(const char* key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::vector<std::pair<std::string, Node>> members() const {
    expect_object();
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      out.emplace_back(it.key(), Node(it.value(), file_, path_ + "/" + it.key()));
    }
    return out;
  }

  std::string str() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected a boolean");
    return value_.get<bool>();
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& n : items()) out.push_back(n.str());
    return out;
  }

 private:
  const ordered_json& value_;
  std::string file_;
  std::string path_;
};

ordered_json parse_file(const fs::path& path) {
  const std::string content = read_file(path);
  try {
    return ordered_json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, content.size());
    const auto line =
        1 + std::count(content.begin(), content.begin() + static_cast<long>(upto), '\n');
    throw ValidationError(path.string() + ":" + std::to_string(line) +
                          ": invalid JSON: " + e.what());
  }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Integral coordinates are written as integers to keep files readable.
ordered_json number_json(double v) {
  if (std::nearbyint(v) == v && std::abs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

std::string non_empty_id(const Node& n) {
  std::string id = n.str();
  if (text::trim(id).empty()) n.fail("empty id");
  return id;
}

template <typename T, typename IdOf>
void require_unique(const std::vector<T>& items, IdOf id_of,
                    const std::string& file, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(id_of(item)).second) {
      throw ValidationError(file + ": duplicate " + what + " '" + id_of(item) +
                            "'");
    }
  }
}

}  // namespace

// --- documents --------------------------------------------------------------

std::vector<DocumentOcr> load_documents(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<DocumentOcr> docs;
  for (const auto& node : top.items()) {
    DocumentOcr doc;
    doc.doc_id = non_empty_id(node.at("doc_id"));
    if (auto ps = node.find("page_size")) {
      const auto dims = ps->items();
      if (dims.size() != 2) ps->fail("page_size must be [width, height]");
      doc.page_size = PageSize{dims[0].number(), dims[1].number()};
      if (doc.page_size->width < 0 || doc.page_size->height < 0) {
        ps->fail("negative page size");
      }
    }
    for (const auto& tn : node.at("tokens").items()) {
      Token t;
      t.text = tn.at("text").str();
      if (text::trim(t.text).empty()) tn.fail("token text is blank");
      const auto box = tn.at("bbox").items();
      if (box.size() != 4) tn.at("bbox").fail("bbox must be [x1, y1, x2, y2]");
      t.bbox = {box[0].number(), box[1].number(), box[2].number(),
                box[3].number()};
      if (t.bbox.x2 < t.bbox.x1 || t.bbox.y2 < t.bbox.y1) {
        tn.at("bbox").fail("bbox has x2 < x1 or y2 < y1");
      }
      if (doc.page_size &&
          (t.bbox.x1 < 0 || t.bbox.y1 < 0 || t.bbox.x2 > doc.page_size->width ||
           t.bbox.y2 > doc.page_size->height)) {
        tn.at("bbox").fail("bbox outside page_size");
      }
      if (auto conf = tn.find("conf")) {
        t.ocr_confidence = conf->number();
        if (*t.ocr_confidence < 0 || *t.ocr_confidence > 1) {
          conf->fail("conf must lie in [0, 1]");
        }
      }
      doc.tokens.push_back(std::move(t));
    }
    docs.push_back(std::move(doc));
  }
  require_unique(docs, [](const DocumentOcr& d) { return d.doc_id; },
                 path.string(), "doc_id");
  return docs;
}

void save_documents(const fs::path& path, std::span<const DocumentOcr> docs) {
  ordered_json arr = ordered_json::array();
  for (const auto& d : docs) {
    ordered_json j;
    j["doc_id"] = d.doc_id;
    if (d.page_size) {
      j["page_size"] = {number_json(d.page_size->width),
                        number_json(d.page_size->height)};
    }
    ordered_json tokens = ordered_json::array();
    for (const auto& t : d.tokens) {
      ordered_json tj;
      tj["text"] = t.text;
      tj["bbox"] = {number_json(t.bbox.x1), number_json(t.bbox.y1),
                    number_json(t.bbox.x2), number_json(t.bbox.y2)};
      if (t.ocr_confidence) tj["conf"] = *t.ocr_confidence;
      tokens.push_back(std::move(tj));
    }
    j["tokens"] = std::move(tokens);
    arr.push_back(std::move(j));
  }
  write_file(path, dump(arr));
}

// --- schema -----------------------------------------------------------------

Schema load_schema(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<FieldSpec> fields;
  for (const auto& node : top.at("fields").items()) {
    FieldSpec f;
    f.name = non_empty_id(node.at("name"));
    try {
      f.kind = parse_field_kind(node.at("kind").str());
    } catch (const ValidationError& e) {
      node.at("kind").fail(e.what());
    }
    if (auto vocab = node.find("vocabulary")) f.vocabulary = vocab->strings();
    fields.push_back(std::move(f));
  }
  try {
    return Schema(std::move(fields));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_schema(const fs::path& path, const Schema& schema) {
  ordered_json fields = ordered_json::array();
  for (const auto& f : schema.fields()) {
    ordered_json j;
    j["name"] = f.name;
    j["kind"] = std::string(to_string(f.kind));
    if (!f.vocabulary.empty()) j["vocabulary"] = f.vocabulary;
    fields.push_back(std::move(j));
  }
  ordered_json root;
  root["fields"] = std::move(fields);
  write_file(path, dump(root));
}

// --- records ----------------------------------------------------------------

std::vector<RawRecord> load_raw_records(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<RawRecord> records;
  for (const auto& node : top.items()) {
    RawRecord r;
    r.doc_id = non_empty_id(node.at("doc_id"));
    for (const auto& [name, fn] : node.at("fields").members()) {
      RawField f;
      f.raw = fn.at("raw").str();
      if (auto kind = fn.find("kind")) {
        try {
          f.kind = parse_field_kind(kind->str());
        } catch (const ValidationError& e) {
          kind->fail(e.what());
        }
      }
      if (auto checked = fn.find("checked")) f.checked = checked->boolean();
      r.fields.emplace(name, std::move(f));
    }
    records.push_back(std::move(r));
  }
  require_unique(records, [](const RawRecord& r) { return r.doc_id; },
                 path.string(), "doc_id");
  return records;
}

void save_raw_records(const fs::path& path, std::span<const RawRecord> records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json fields = ordered_json::object();
    for (const auto& [name, f] : r.fields) {
      ordered_json fj;
      fj["raw"] = f.raw;
      if (f.kind) fj["kind"] = std::string(to_string(*f.kind));
      if (f.checked) fj["checked"] = *f.checked;
      fields[name] = std::move(fj);
    }
    ordered_json j;
    j["doc_id"] = r.doc_id;
    j["fields"] = std::move(fields);
    arr.push_back(std::move(j));
  }
  write_file(path, dump(arr));
}

std::set<std::string> Collection::doc_ids() const {
  std::set<std::string> ids;
  for (const auto& d : documents) ids.insert(d.doc_id);
  for (const auto& r : records) ids.insert(r.doc_id);
  return ids;
}

Collection load_collection(const fs::path& dir) {
  Collection c;
  const fs::path docs = dir / kDocumentsFile;
  const fs::path records = dir / kRecordsFile;
  const fs::path schema = dir / kSchemaFile;
  if (!fs::exists(docs) && !fs::exists(records)) {
    throw ValidationError(dir.string() + ": neither " + kDocumentsFile +
                          " nor " + kRecordsFile + " found");
  }
  c.schema = fs::exists(schema) ? load_schema(schema)
                                : Schema::candidate_registration();
  if (fs::exists(docs)) c.documents = load_documents(docs);
  if (fs::exists(records)) {
    c.raw_records = load_raw_records(records);
    c.records.reserve(c.raw_records.size());
    for (const auto& r : c.raw_records) {
      try {
        c.records.push_back(normalize_record(r, c.schema));
      } catch (const ValidationError& e) {
        throw ValidationError(records.string() + ": " + e.what());
      }
    }
  }
  return c;
}

// --- questions --------------------------------------------------------------

std::vector<Question> load_questions(const fs::path& path,
                                     const Schema* schema) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<Question> questions;
  for (const auto& node : top.items()) {
    Question q;
    q.question_id = non_empty_id(node.at("question_id"));
    q.text = node.at("text").str();
    if (auto qn = node.find("query")) {
      StructuredQuery sq;
      sq.question_id = q.question_id;
      for (const auto& cn : qn->at("constraints").items()) {
        Constraint c;
        c.field = non_empty_id(cn.at("field"));
        try {
          c.op = parse_constraint_op(cn.at("op").str());
        } catch (const ValidationError& e) {
          cn.at("op").fail(e.what());
        }
        c.values = cn.at("values").strings();
        if (auto inc = cn.find("inclusive")) {
          const auto flags = inc->items();
          if (flags.size() != 2) inc->fail("inclusive must be [lower, upper]");
          c.lower_inclusive = flags[0].boolean();
          c.upper_inclusive = flags[1].boolean();
        }
        sq.constraints.push_back(std::move(c));
      }
      sq.answer_field = non_empty_id(qn->at("answer_field"));
      if (auto fmt = qn->find("answer_format")) {
        const std::string f = fmt->str();
        if (f == "year") {
          sq.answer_format = AnswerFormat::kYear;
        } else if (f != "date") {
          fmt->fail("answer_format must be \"date\" or \"year\"");
        }
      }
      if (schema) {
        try {
          validate_query(sq, *schema);
        } catch (const ValidationError& e) {
          qn->fail(e.what());
        }
      }
      q.query = std::move(sq);
    }
    questions.push_back(std::move(q));
  }
  require_unique(questions, [](const Question& q) { return q.question_id; },
                 path.string(), "question_id");
  return questions;
}

void save_questions(const fs::path& path, std::span<const Question> questions) {
  ordered_json arr = ordered_json::array();
  for (const auto& q : questions) {
    ordered_json j;
    j["question_id"] = q.question_id;
    j["text"] = q.text;
    if (q.query) {
      ordered_json constraints = ordered_json::array();
      for (const auto& c : q.query->constraints) {
        ordered_json cj;
        cj["field"] = c.field;
        cj["op"] = std::string(to_string(c.op));
        cj["values"] = c.values;
        if (!c.lower_inclusive || !c.upper_inclusive) {
          cj["inclusive"] = {c.lower_inclusive, c.upper_inclusive};
        }
        constraints.push_back(std::move(cj));
      }
      ordered_json qj;
      qj["constraints"] = std::move(constraints);
      qj["answer_field"] = q.query->answer_field;
      if (q.query->answer_format == AnswerFormat::kYear) {
        qj["answer_format"] = "year";
      }
      j["query"] = std::move(qj);
    }
    arr.push_back(std::move(j));
  }
  write_file(path, dump(arr));
}

// --- ground truth -----------------------------------------------------------

std::vector<GroundTruthEntry> load_gt(const fs::path& path,
                                      const std::set<std::string>* known_doc_ids) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<GroundTruthEntry> gt;
  for (const auto& node : top.items()) {
    GroundTruthEntry e;
    e.question_id = non_empty_id(node.at("question_id"));
    e.answers = node.at("answers").strings();
    const Node rel = node.at("relevant");
    for (const auto& id_node : rel.items()) {
      std::string id = non_empty_id(id_node);
      if (known_doc_ids && !known_doc_ids->contains(id)) {
        id_node.fail("unknown doc_id '" + id + "'");
      }
      if (!e.relevant_doc_ids.insert(id).second) {
        id_node.fail("duplicate doc_id '" + id + "'");
      }
    }
    if (e.relevant_doc_ids.empty()) rel.fail("relevant list is empty");
    gt.push_back(std::move(e));
  }
  require_unique(gt, [](const GroundTruthEntry& e) { return e.question_id; },
                 path.string(), "question_id");
  return gt;
}

void save_gt(const fs::path& path, std::span<const GroundTruthEntry> gt) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : gt) {
    ordered_json j;
    j["question_id"] = e.question_id;
    j["answers"] = e.answers;
    j["relevant"] = std::vector<std::string>(e.relevant_doc_ids.begin(),
                                             e.relevant_doc_ids.end());
    arr.push_back(std::move(j));
  }
  write_file(path, dump(arr));
}

// --- submissions ------------------------------------------------------------

std::vector<Submission> load_submissions(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  std::vector<Submission> subs;
  for (const auto& node : top.items()) {
    Submission s;
    s.question_id = non_empty_id(node.at("question_id"));
    s.answers = node.at("answers").strings();
    std::unordered_set<std::string> seen;
    for (const auto& rn : node.at("ranking").items()) {
      RankedDoc d;
      d.doc_id = non_empty_id(rn.at("doc_id"));
      d.confidence = rn.at("confidence").number();
      if (d.confidence < 0 || d.confidence > 1) {
        rn.at("confidence").fail("confidence must lie in [0, 1]");
      }
      if (!seen.insert(d.doc_id).second) {
        rn.fail("duplicate doc_id '" + d.doc_id + "' in ranking");
      }
      s.ranking.push_back(std::move(d));
    }
    subs.push_back(std::move(s));
  }
  return subs;
}

void save_submissions(const fs::path& path,
                      std::span<const Submission> submissions) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : submissions) {
    ordered_json ranking = ordered_json::array();
    for (const auto& d : s.ranking) {
      ordered_json dj;
      dj["doc_id"] = d.doc_id;
      dj["confidence"] = d.confidence;
      ranking.push_back(std::move(dj));
    }
    ordered_json j;
    j["question_id"] = s.question_id;
    j["answers"] = s.answers;
    j["ranking"] = std::move(ranking);
    arr.push_back(std::move(j));
  }
  write_file(path, dump(arr));
}

KeywordOverrides load_keyword_overrides(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  KeywordOverrides out;
  for (const auto& [qid, node] : top.members()) {
    std::vector<std::string> kws;
    for (const auto& s : node.strings()) {
      std::string k = text::fold_case_utf8(text::trim(s));
      if (k.empty()) node.fail("blank keyword");
      if (std::find(kws.begin(), kws.end(), k) == kws.end()) kws.push_back(k);
    }
    if (kws.empty()) node.fail("empty keyword list");
    out.emplace(qid, std::move(kws));
  }
  return out;
}

// --- report -----------------------------------------------------------------

void save_report(const fs::path& path, const MetricReport& report) {
  ordered_json per = ordered_json::array();
  for (const auto& q : report.per_question) {
    ordered_json j;
    j["question_id"] = q.question_id;
    j["ap"] = q.ap;
    j["anlsl"] = q.anlsl;
    per.push_back(std::move(j));
  }
  ordered_json root;
  root["map_percent"] = report.map_percent;
  root["anlsl"] = report.anlsl;
  root["per_question"] = std::move(per);
  write_file(path, dump(root));
}

MetricReport load_report(const fs::path& path) {
  const auto root = parse_file(path);
  const Node top(root, path.string(), "");
  MetricReport r;
  r.map_percent = top.at("map_percent").number();
  r.anlsl = top.at("anlsl").number();
  for (const auto& n : top.at("per_question").items()) {
    r.per_question.push_back({non_empty_id(n.at("question_id")),
                              n.at("ap").number(), n.at("anlsl").number()});
  }
  return r;
}

std::string render_report_table(const MetricReport& report) {
  std::size_t width = 8;
  for (const auto& q : report.per_question) {
    width = std::max(width, q.question_id.size());
  }
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s\n", static_cast<int>(width),
                "question", "AP", "ANLSL");
  out += buf;
  for (const auto& q : report.per_question) {
    std::snprintf(buf, sizeof buf, "%-*s  %8.4f  %8.4f\n",
                  static_cast<int>(width), q.question_id.c_str(), q.ap, q.anlsl);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "MAP %.2f  ANLSL %.4f  (%zu questions)\n",
                report.map_percent, report.anlsl, report.per_question.size());
  out += buf;
  return out;
}

// --- cross-file checks ------------------------------------------------------

std::vector<std::string> validate_dataset(const Collection& collection,
                                          std::span<const Question> questions,
                                          std::span<const GroundTruthEntry> gt) {
  std::vector<std::string> warnings;
  const auto ids = collection.doc_ids();
  for (const auto& e : gt) {
    for (const auto& id : e.relevant_doc_ids) {
      if (!ids.contains(id)) {
        throw ValidationError("gt question '" + e.question_id +
                              "' references unknown doc_id '" + id + "'");
      }
    }
  }
  for (const auto& q : questions) {
    if (q.query) validate_query(*q.query, collection.schema);
  }

  std::set<std::string> qids, gids;
  for (const auto& q : questions) qids.insert(q.question_id);
  for (const auto& e : gt) gids.insert(e.question_id);
  for (const auto& id : gids) {
    if (!qids.empty() && !qids.contains(id)) {
      throw ValidationError("gt question '" + id + "' not in questions file");
    }
  }
  for (const auto& id : qids) {
    if (!gids.empty() && !gids.contains(id)) {
      warnings.push_back("question '" + id + "' has no ground truth");
    }
  }

  if (!collection.documents.empty() && !collection.records.empty()) {
    std::set<std::string> doc_ids, rec_ids;
    for (const auto& d : collection.documents) doc_ids.insert(d.doc_id);
    for (const auto& r : collection.records) rec_ids.insert(r.doc_id);
    if (doc_ids != rec_ids) {
      warnings.push_back("documents.json and records.json cover different doc ids");
    }
  }
  for (const auto& r : collection.records) {
    for (const auto& [name, v] : r.fields) {
      if (!v.valid && !v.raw.empty()) {
        warnings.push_back("record '" + r.doc_id + "': field '" + name +
                           "' is unreadable ('" + v.raw + "')");
      }
    }
  }
  return warnings;
}

}  // namespace colqa
