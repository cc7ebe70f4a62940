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

#ifndef COLQA_QA_ADAPTER_HPP_
#define COLQA_QA_ADAPTER_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colqa/context.hpp"
#include "colqa/errors.hpp"
#include "colqa/metrics.hpp"
#include "colqa/textspot.hpp"

namespace colqa {

// Wire protocol, one JSON object per line (stdio) or per POST body (HTTP):
//   request  {"id", "question", "context"}
//   response {"id", "answer", "score", "start", "end"}  or  {"id", "error"}
// start/end are code point offsets into the context, end exclusive, and may
// be omitted or null together.

struct QaRequest {
  std::string id;
  std::string question;
  std::string context;

  friend bool operator==(const QaRequest&, const QaRequest&) = default;
};

struct SpanAnswer {
  std::string text;
  double score = 0.0;
  std::optional<std::int64_t> start_char;
  std::optional<std::int64_t> end_char;

  friend bool operator==(const SpanAnswer&, const SpanAnswer&) = default;
};

struct QaResponse {
  std::string id;
  std::optional<SpanAnswer> answer;  // unset on error responses
  std::string error;

  bool ok() const { return answer.has_value(); }
  friend bool operator==(const QaResponse&, const QaResponse&) = default;
};

class ProtocolError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

std::string encode_request(const QaRequest& request);
QaRequest decode_request(std::string_view line);
std::string encode_response(const QaResponse& response);
// Throws ProtocolError on malformed JSON, missing or mistyped fields.
QaResponse decode_response(std::string_view line);

// Checks that the span indices (when present) slice `context` to exactly the
// answer text. Returns an empty string when consistent, else the reason.
std::string check_span(const SpanAnswer& span, std::string_view context);

class QaAdapter {
 public:
  virtual ~QaAdapter() = default;
  // Throws RuntimeFailure (or ProtocolError) on transport problems. Must be
  // safe to call from several threads.
  virtual QaResponse ask(const QaRequest& request) = 0;
};

// Answers with the first whitespace-separated context token, score 1.
class EchoAdapter : public QaAdapter {
 public:
  QaResponse ask(const QaRequest& request) override;
};

// Talks to a child process (`/bin/sh -c command`) over its stdin/stdout.
// Requests are sent one at a time; stale responses with foreign ids are
// skipped.
class StdioAdapter : public QaAdapter {
 public:
  StdioAdapter(std::string command, std::chrono::milliseconds timeout);
  ~StdioAdapter() override;
  StdioAdapter(const StdioAdapter&) = delete;
  StdioAdapter& operator=(const StdioAdapter&) = delete;

  QaResponse ask(const QaRequest& request) override;

 private:
  void write_line(const std::string& line);
  std::string read_line(std::chrono::steady_clock::time_point deadline);

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::mutex mutex_;
};

// POSTs each request to http://host[:port]/path.
class HttpAdapter : public QaAdapter {
 public:
  HttpAdapter(std::string url, std::chrono::milliseconds timeout);
  QaResponse ask(const QaRequest& request) override;

 private:
  std::string base_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

inline constexpr std::string_view kAdapterEnvVar = "COLQA_ADAPTER";

// "echo", "stdio:<command>" or "http://host:port/path". Throws
// ValidationError for anything else.
std::unique_ptr<QaAdapter> make_adapter(
    std::string_view endpoint,
    std::chrono::milliseconds timeout = std::chrono::seconds(30));

struct DocumentFailure {
  std::string doc_id;
  std::string reason;
};

struct AnswerOutcome {
  AnswerList answers;
  std::vector<DocumentFailure> failures;
};

struct AnswerDocumentsOptions {
  double line_tolerance_factor = kDefaultLineToleranceFactor;
};

// Asks the adapter about every relevant document (in `docs` order) and
// returns the distinct answers ordered by descending adapter score. Failed
// documents are recorded and skipped; RuntimeFailure when every relevant
// document failed. ValidationError when a relevant id is not among `docs`.
AnswerOutcome answer_documents(std::string_view question,
                               std::span<const DocumentOcr> docs,
                               std::span<const std::string> relevant,
                               QaAdapter& adapter,
                               const AnswerDocumentsOptions& options = {});

}  // namespace colqa

#endif  // COLQA_QA_ADAPTER_HPP_
