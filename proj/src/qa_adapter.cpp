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

#include "colqa/qa_adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

namespace colqa {

using ordered_json = nlohmann::ordered_json;

namespace {

const ordered_json& require(const ordered_json& obj, const char* key,
                            std::string_view what) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ProtocolError(std::string(what) + ": missing \"" + key + "\"");
  }
  return *it;
}

std::string require_string(const ordered_json& obj, const char* key,
                           std::string_view what) {
  const auto& v = require(obj, key, what);
  if (!v.is_string()) {
    throw ProtocolError(std::string(what) + ": \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

ordered_json parse_object(std::string_view line, std::string_view what) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ProtocolError(std::string(what) + ": expected a JSON object");
  }
  return j;
}

std::optional<std::int64_t> optional_index(const ordered_json& j,
                                           const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw ProtocolError(std::string("response: \"") + key +
                        "\" must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace

std::string encode_request(const QaRequest& request) {
  ordered_json j;
  j["id"] = request.id;
  j["question"] = request.question;
  j["context"] = request.context;
  return j.dump();
}

QaRequest decode_request(std::string_view line) {
  const auto j = parse_object(line, "request");
  return {require_string(j, "id", "request"),
          require_string(j, "question", "request"),
          require_string(j, "context", "request")};
}

std::string encode_response(const QaResponse& response) {
  ordered_json j;
  j["id"] = response.id;
  if (!response.answer) {
    j["error"] = response.error;
    return j.dump();
  }
  const SpanAnswer& a = *response.answer;
  j["answer"] = a.text;
  j["score"] = a.score;
  j["start"] = a.start_char ? ordered_json(*a.start_char) : ordered_json(nullptr);
  j["end"] = a.end_char ? ordered_json(*a.end_char) : ordered_json(nullptr);
  return j.dump();
}

QaResponse decode_response(std::string_view line) {
  const auto j = parse_object(line, "response");
  QaResponse r;
  r.id = require_string(j, "id", "response");
  if (j.contains("error")) {
    const auto& e = j["error"];
    r.error = e.is_string() ? e.get<std::string>() : e.dump();
    return r;
  }
  SpanAnswer a;
  a.text = require_string(j, "answer", "response");
  const auto& score = require(j, "score", "response");
  if (!score.is_number()) {
    throw ProtocolError("response: \"score\" must be a number");
  }
  a.score = score.get<double>();
  a.start_char = optional_index(j, "start");
  a.end_char = optional_index(j, "end");
  if (a.start_char.has_value() != a.end_char.has_value()) {
    throw ProtocolError("response: \"start\" and \"end\" must be given together");
  }
  r.answer = std::move(a);
  return r;
}

std::string check_span(const SpanAnswer& span, std::string_view context) {
  if (!std::isfinite(span.score)) return "non-finite score";
  if (!span.start_char) return {};
  const std::int64_t start = *span.start_char, end = *span.end_char;
  const std::u32string cps = text::decode_utf8(context);
  if (start < 0 || end < start || end > static_cast<std::int64_t>(cps.size())) {
    return "span [" + std::to_string(start) + ", " + std::to_string(end) +
           ") outside context of length " + std::to_string(cps.size());
  }
  const std::string slice = text::encode_utf8(std::u32string_view(cps).substr(
      static_cast<std::size_t>(start), static_cast<std::size_t>(end - start)));
  if (slice != span.text) {
    return "span text '" + slice + "' differs from answer '" + span.text + "'";
  }
  return {};
}

// --- echo -------------------------------------------------------------------

QaResponse EchoAdapter::ask(const QaRequest& request) {
  const std::u32string cps = text::decode_utf8(request.context);
  auto is_space = [](char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r';
  };
  std::size_t begin = 0;
  while (begin < cps.size() && is_space(cps[begin])) ++begin;
  std::size_t end = begin;
  while (end < cps.size() && !is_space(cps[end])) ++end;
  SpanAnswer a;
  a.text = text::encode_utf8(std::u32string_view(cps).substr(begin, end - begin));
  a.score = 1.0;
  a.start_char = static_cast<std::int64_t>(begin);
  a.end_char = static_cast<std::int64_t>(end);
  return {request.id, std::move(a), {}};
}

// --- stdio ------------------------------------------------------------------

StdioAdapter::StdioAdapter(std::string command,
                           std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  // A dead child must surface as a write error, not kill us.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0) {
    throw RuntimeFailure(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw RuntimeFailure(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw RuntimeFailure(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

StdioAdapter::~StdioAdapter() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    // Closing stdin asks the child to exit; give it a moment, then insist.
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
      ::usleep(10000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }
}

void StdioAdapter::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw RuntimeFailure("adapter '" + command_ +
                           "': write failed: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string StdioAdapter::read_line(
    std::chrono::steady_clock::time_point deadline) {
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      throw RuntimeFailure("adapter '" + command_ + "': timed out");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw RuntimeFailure("adapter '" + command_ +
                           "': poll failed: " + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw RuntimeFailure("adapter '" + command_ +
                           "': read failed: " + std::strerror(errno));
    }
    if (n == 0) {
      throw RuntimeFailure("adapter '" + command_ + "': process closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

QaResponse StdioAdapter::ask(const QaRequest& request) {
  std::lock_guard lock(mutex_);
  write_line(encode_request(request));
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    const std::string line = read_line(deadline);
    if (text::trim(line).empty()) continue;
    QaResponse response = decode_response(line);
    if (response.id == request.id) return response;
    spdlog::warn("adapter: skipping response for stale id '{}'", response.id);
  }
}

// --- http -------------------------------------------------------------------

HttpAdapter::HttpAdapter(std::string url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw ValidationError("http adapter: unsupported url '" + url + "'");
  }
  const auto slash = url.find('/', kScheme.size());
  base_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

QaResponse HttpAdapter::ask(const QaRequest& request) {
  // A client per call keeps this thread-safe without a lock.
  httplib::Client client(base_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  const auto result =
      client.Post(path_, encode_request(request), "application/json");
  if (!result) {
    throw RuntimeFailure("adapter " + base_ + path_ + ": " +
                         httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw RuntimeFailure("adapter " + base_ + path_ + ": HTTP " +
                         std::to_string(result->status));
  }
  QaResponse response = decode_response(result->body);
  if (response.id != request.id) {
    throw ProtocolError("adapter " + base_ + path_ + ": response id '" +
                        response.id + "' does not match request '" +
                        request.id + "'");
  }
  return response;
}

std::unique_ptr<QaAdapter> make_adapter(std::string_view endpoint,
                                        std::chrono::milliseconds timeout) {
  if (endpoint == "echo") return std::make_unique<EchoAdapter>();
  if (endpoint.rfind("stdio:", 0) == 0) {
    std::string command(endpoint.substr(6));
    if (text::trim(command).empty()) {
      throw ValidationError("adapter endpoint 'stdio:' needs a command");
    }
    return std::make_unique<StdioAdapter>(std::move(command), timeout);
  }
  if (endpoint.rfind("http://", 0) == 0) {
    return std::make_unique<HttpAdapter>(std::string(endpoint), timeout);
  }
  throw ValidationError("unsupported adapter endpoint '" + std::string(endpoint) +
                        "' (expected echo, stdio:<command> or http://...)");
}

// --- answering --------------------------------------------------------------

AnswerOutcome answer_documents(std::string_view question,
                               std::span<const DocumentOcr> docs,
                               std::span<const std::string> relevant,
                               QaAdapter& adapter,
                               const AnswerDocumentsOptions& options) {
  std::unordered_set<std::string_view> wanted(relevant.begin(), relevant.end());
  {
    std::unordered_set<std::string_view> present;
    for (const auto& d : docs) present.insert(d.doc_id);
    for (const auto& id : relevant) {
      if (!present.contains(id)) {
        throw ValidationError("answer_documents: relevant doc '" + id +
                              "' not in the document list");
      }
    }
  }

  struct Candidate {
    double score;
    std::size_t order;
    std::string text;
  };
  std::vector<Candidate> candidates;
  AnswerOutcome outcome;
  std::size_t asked = 0;

  for (std::size_t i = 0; i < docs.size(); ++i) {
    const DocumentOcr& doc = docs[i];
    if (!wanted.erase(doc.doc_id)) continue;
    ++asked;
    QaRequest request{doc.doc_id, std::string(question),
                      serialize_context(doc, options.line_tolerance_factor)};
    try {
      QaResponse response = adapter.ask(request);
      if (!response.ok()) {
        outcome.failures.push_back({doc.doc_id, "adapter error: " + response.error});
        continue;
      }
      if (auto why = check_span(*response.answer, request.context); !why.empty()) {
        outcome.failures.push_back({doc.doc_id, "protocol violation: " + why});
        continue;
      }
      if (response.answer->text.empty()) continue;
      candidates.push_back({response.answer->score, i,
                            std::move(response.answer->text)});
    } catch (const RuntimeFailure& e) {
      outcome.failures.push_back({doc.doc_id, e.what()});
    }
  }
  for (const auto& f : outcome.failures) {
    spdlog::warn("adapter failed on document '{}': {}", f.doc_id, f.reason);
  }
  if (asked > 0 && outcome.failures.size() == asked) {
    throw RuntimeFailure("adapter failed on all " + std::to_string(asked) +
                         " relevant documents; first error: " +
                         outcome.failures.front().reason);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.score > b.score;
                   });
  std::unordered_set<std::string> seen;
  for (auto& c : candidates) {
    if (seen.insert(c.text).second) outcome.answers.push_back(std::move(c.text));
  }
  return outcome;
}

}  // namespace colqa
