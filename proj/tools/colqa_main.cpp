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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "colqa/dataset_io.hpp"
#include "colqa/errors.hpp"
#include "colqa/fixture.hpp"
#include "colqa/metrics.hpp"
#include "colqa/pipeline.hpp"
#include "colqa/qa_adapter.hpp"

namespace fs = std::filesystem;
using namespace colqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct GlobalFlags {
  double tau = 0.5;
  double theta = kDefaultTheta;
  bool case_sensitive = false;
  bool yes_only = false;
  bool strict_missing = false;
  std::string adapter;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  bool verbose = false;
};

struct DataFlags {
  fs::path data;
  fs::path questions;
  fs::path gt;
  fs::path keywords;

  fs::path questions_path() const {
    return questions.empty() ? data / kQuestionsFile : questions;
  }
  fs::path gt_path() const { return gt.empty() ? data / kGroundTruthFile : gt; }
  fs::path keywords_path() const {
    return keywords.empty() ? data / kKeywordsFile : keywords;
  }
};

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--data", d.data, "Dataset directory")->required();
  cmd->add_option("--questions", d.questions,
                  "Questions file (default: <data>/questions.json)");
  cmd->add_option("--gt", d.gt, "Ground-truth file (default: <data>/gt.json)");
  cmd->add_option("--keywords", d.keywords,
                  "Keyword overrides (default: <data>/keywords.json if present)");
}

std::unique_ptr<QaAdapter> open_adapter(const GlobalFlags& g) {
  std::string endpoint = g.adapter;
  if (endpoint.empty()) {
    if (const char* env = std::getenv(std::string(kAdapterEnvVar).c_str())) {
      endpoint = env;
    }
  }
  if (endpoint.empty()) {
    throw ValidationError("no adapter endpoint: pass --adapter or set " +
                          std::string(kAdapterEnvVar));
  }
  return make_adapter(endpoint);
}

// Everything a pipeline-running verb needs, kept alive for the config's
// pointers and spans.
struct Session {
  Collection collection;
  std::vector<Question> questions;
  std::vector<GroundTruthEntry> gt;
  std::unique_ptr<QaAdapter> adapter;
  PipelineConfig config;
};

void open_session(Session& s, const GlobalFlags& g, const DataFlags& d,
                  Retriever retriever, Answerer answerer, bool answering) {
  s.collection = load_collection(d.data);
  s.questions = load_questions(d.questions_path(), &s.collection.schema);
  s.config.retriever = retriever;
  s.config.answerer = answerer;
  s.config.theta = g.theta;
  s.config.case_sensitive = g.case_sensitive;
  s.config.yes_only = g.yes_only;
  s.config.strict_missing = g.strict_missing;
  s.config.threads = g.threads;
  const fs::path kw = d.keywords_path();
  if (!d.keywords.empty() || fs::exists(kw)) {
    s.config.keyword_overrides = load_keyword_overrides(kw);
  }
  if (retriever == Retriever::kGroundTruth) {
    const auto ids = s.collection.doc_ids();
    s.gt = load_gt(d.gt_path(), &ids);
    s.config.ground_truth = s.gt;
  }
  if (answering && answerer == Answerer::kAdapter) {
    s.adapter = open_adapter(g);
    s.config.adapter = s.adapter.get();
  }
}

int cmd_validate(const DataFlags& d) {
  const Collection collection = load_collection(d.data);
  std::vector<Question> questions;
  if (fs::exists(d.questions_path()) || !d.questions.empty()) {
    questions = load_questions(d.questions_path(), &collection.schema);
  }
  std::vector<GroundTruthEntry> gt;
  if (fs::exists(d.gt_path()) || !d.gt.empty()) {
    const auto ids = collection.doc_ids();
    gt = load_gt(d.gt_path(), &ids);
  }
  if (fs::exists(d.keywords_path()) || !d.keywords.empty()) {
    load_keyword_overrides(d.keywords_path());
  }
  const auto warnings = validate_dataset(collection, questions, gt);
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  std::cout << "ok: " << collection.documents.size() << " documents, "
            << collection.records.size() << " records, " << questions.size()
            << " questions, " << gt.size() << " ground-truth entries, "
            << warnings.size() << " warnings\n";
  return kExitOk;
}

int cmd_evaluate(const GlobalFlags& g, const fs::path& gt_path,
                 const fs::path& submission_path, const fs::path& report_path) {
  const auto gt = load_gt(gt_path);
  const auto submissions = load_submissions(submission_path);
  AnlslOptions opts;
  opts.tau = g.tau;
  opts.case_fold = !g.case_sensitive;
  const MetricReport report = evaluate(submissions, gt, opts);
  std::cout << render_report_table(report);
  if (!report_path.empty()) save_report(report_path, report);
  return kExitOk;
}

int cmd_fixture(const GlobalFlags& g, const fs::path& out, std::size_t n_docs,
                std::size_t per_template, double noise_rate) {
  FixtureSpec spec;
  spec.n_docs = n_docs;
  spec.seed = g.seed;
  spec.questions_per_template = per_template;
  Fixture fx = generate_fixture(spec);
  if (noise_rate > 0.0) {
    const NoiseReport noise = inject_answer_noise(fx, noise_rate, g.seed);
    spdlog::info("noise: {} of {} answer fields edited (target {})",
                 noise.injected, noise.answer_fields, noise.target);
  }
  fs::create_directories(out);
  save_fixture(out, fx);
  std::cout << "wrote " << fx.documents.size() << " documents and "
            << fx.questions.size() << " questions to " << out.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question answering over document collections: retrieval, "
               "answering and scoring"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--tau", g.tau, "ANLSL similarity cut-off")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--theta", g.theta, "Text-spotting relevance threshold")
      ->capture_default_str();
  app.add_flag("--case-sensitive", g.case_sensitive,
               "Compare strings without case folding");
  app.add_flag("--paper-literal", g.yes_only,
               "Yes/no questions with no matching record get no answer");
  app.add_flag("--strict-missing", g.strict_missing,
               "neq/not_in require the field to be present");
  app.add_option("--adapter", g.adapter,
                 "QA adapter: echo, stdio:<command> or http://host:port/path "
                 "(default: $" + std::string(kAdapterEnvVar) + ")");
  app.add_option("--seed", g.seed, "Fixture seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "Debug logging");

  DataFlags validate_d, rank_d, answer_d, run_d;
  std::string rank_retriever = "textspot", run_retriever = "textspot";
  std::string answer_answerer = "adapter", run_answerer = "adapter";
  fs::path rank_out, answer_out, answer_ranking, run_out;

  auto* validate = app.add_subcommand("validate", "Check a dataset directory");
  add_data_flags(validate, validate_d);

  auto* rank = app.add_subcommand("rank", "Rank documents for every question");
  add_data_flags(rank, rank_d);
  rank->add_option("--retriever", rank_retriever, "textspot, records or gt")
      ->capture_default_str();
  rank->add_option("-o,--out", rank_out, "Submissions file")->required();

  auto* answer = app.add_subcommand("answer", "Answer from an existing ranking");
  add_data_flags(answer, answer_d);
  answer->add_option("--ranking", answer_ranking, "Submissions from `rank`")
      ->required();
  answer->add_option("--retriever", run_retriever,
                     "Retriever that produced the ranking (sets the cut-off)")
      ->capture_default_str();
  answer->add_option("--answerer", answer_answerer, "adapter or records")
      ->capture_default_str();
  answer->add_option("-o,--out", answer_out, "Submissions file")->required();

  auto* run = app.add_subcommand("run", "Rank and answer every question");
  add_data_flags(run, run_d);
  run->add_option("--retriever", run_retriever, "textspot, records or gt")
      ->capture_default_str();
  run->add_option("--answerer", run_answerer, "adapter or records")
      ->capture_default_str();
  run->add_option("-o,--out", run_out, "Submissions file")->required();

  fs::path eval_gt, eval_sub, eval_report;
  auto* eval = app.add_subcommand("evaluate", "Score submissions (MAP, ANLSL)");
  eval->add_option("--gt", eval_gt, "Ground-truth file")->required();
  eval->add_option("--submission", eval_sub, "Submissions file")->required();
  eval->add_option("--report", eval_report, "Write report JSON here");

  fs::path fixture_out;
  std::size_t fixture_docs = 500, fixture_per_template = 2;
  double fixture_noise = 0.0;
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic dataset");
  fixture->add_option("-o,--out", fixture_out, "Output directory")->required();
  fixture->add_option("--n-docs", fixture_docs, "Documents")->capture_default_str();
  fixture->add_option("--questions-per-template", fixture_per_template,
                      "Questions per template")
      ->capture_default_str();
  fixture->add_option("--noise-rate", fixture_noise,
                      "Share of answer fields given a one-letter error")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("colqa"));
  spdlog::set_level(g.verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*validate) return cmd_validate(validate_d);
    if (*eval) return cmd_evaluate(g, eval_gt, eval_sub, eval_report);
    if (*fixture) {
      return cmd_fixture(g, fixture_out, fixture_docs, fixture_per_template,
                         fixture_noise);
    }
    Session s;
    if (*rank) {
      open_session(s, g, rank_d, parse_retriever(rank_retriever),
                   Answerer::kRecords, false);
      check_config(s.collection, s.questions, s.config);
      save_submissions(rank_out, rank_questions(s.collection, s.questions, s.config));
    } else if (*answer) {
      open_session(s, g, answer_d, parse_retriever(run_retriever),
                   parse_answerer(answer_answerer), true);
      check_config(s.collection, s.questions, s.config);
      auto ranked = load_submissions(answer_ranking);
      save_submissions(answer_out, answer_questions(s.collection, s.questions,
                                                    std::move(ranked), s.config));
    } else if (*run) {
      open_session(s, g, run_d, parse_retriever(run_retriever),
                   parse_answerer(run_answerer), true);
      check_config(s.collection, s.questions, s.config);
      save_submissions(run_out, run_pipeline(s.collection, s.questions, s.config));
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
