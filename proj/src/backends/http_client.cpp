// Copyright 2026 The vidcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidcheck/backends/http_client.hpp"

#include <httplib.h>

#include <cmath>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "vidcheck/backends/wire.hpp"

namespace vidcheck::backends {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::chrono::milliseconds backoff_delay(int retry, int base_ms, double jitter) {
  if (retry < 0) retry = 0;
  jitter = std::clamp(jitter, -1.0, 1.0);
  const double ms = static_cast<double>(base_ms) * std::ldexp(1.0, retry) * (1.0 + 0.2 * jitter);
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(ms)));
}

ConcurrencyLimiter::ConcurrencyLimiter(int max_in_flight)
    : capacity_(max_in_flight), slots_(std::max(max_in_flight, 1)) {
  if (max_in_flight < 1) throw Error(Errc::InvalidConfig, "max_concurrent_requests must be >= 1");
}

ConcurrencyLimiter::Permit::Permit(ConcurrencyLimiter& limiter) : limiter_(limiter) {
  limiter_.slots_.acquire();
  const int now = limiter_.in_flight_.fetch_add(1) + 1;
  int peak = limiter_.peak_.load();
  while (now > peak && !limiter_.peak_.compare_exchange_weak(peak, now)) {
  }
}

ConcurrencyLimiter::Permit::~Permit() {
  limiter_.in_flight_.fetch_sub(1);
  limiter_.slots_.release();
}

AuditLog::AuditLog(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::app);
  if (!out_) throw Error(Errc::InvalidConfig, "cannot open audit log " + path.string());
}

void AuditLog::write(const json& entry) {
  const std::string line = entry.dump();
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
}

JsonHttpClient::JsonHttpClient(BackendConfig config)
    : config_(std::move(config)),
      limiter_(config_.max_concurrent_requests),
      rng_(config_.jitter_seed) {
  validate(config_);
  if (config_.endpoint.empty()) throw Error(Errc::InvalidConfig, "backend endpoint is empty");
  scheme_host_port_ = config_.endpoint;
  while (!scheme_host_port_.empty() && scheme_host_port_.back() == '/') scheme_host_port_.pop_back();
  if (config_.audit_path) audit_ = std::make_unique<AuditLog>(*config_.audit_path);
}

double JsonHttpClient::NextJitter() {
  std::lock_guard lock(rng_mutex_);
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
}

namespace {

struct Attempt {
  std::optional<json> body;
  std::optional<BackendError> error;
  bool retryable = false;
  int status = 0;
};

Attempt send_once(const std::string& base, const BackendConfig& cfg, std::string_view route,
                  const std::string& payload) {
  httplib::Client cli(base);
  const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  if (cfg.auth_token) cli.set_bearer_token_auth(*cfg.auth_token);

  const auto start = Clock::now();
  auto res = cli.Post(std::string(route), payload, "application/json");
  const auto elapsed = Clock::now() - start;

  Attempt a;
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                            elapsed >= timeout * 9 / 10);
    a.retryable = true;
    a.error = timed_out ? BackendError(Errc::Timeout, std::string(route) + " timed out")
                        : BackendError(Errc::ServiceError,
                                       std::string(route) + ": " + httplib::to_string(err));
    return a;
  }
  a.status = res->status;
  if (res->status < 200 || res->status >= 300) {
    a.retryable = res->status == 429 || res->status >= 500;
    a.error = BackendError(Errc::ServiceError,
                           std::string(route) + " returned HTTP " + std::to_string(res->status),
                           res->status);
    return a;
  }
  try {
    a.body = json::parse(res->body);
  } catch (const json::exception& e) {
    a.error = BackendError(Errc::MalformedResponse, std::string(route) + ": " + e.what(),
                           res->status);
  }
  return a;
}

}  // namespace

json JsonHttpClient::post(std::string_view route, const json& body, const std::string& video_id) {
  const std::string payload = body.dump();
  const int total = config_.max_retries + 1;
  for (int attempt = 0;; ++attempt) {
    const auto start = Clock::now();
    Attempt a;
    {
      ConcurrencyLimiter::Permit permit(limiter_);
      a = send_once(scheme_host_port_, config_, route, payload);
    }
    if (audit_) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
      audit_->write({{"video_id", video_id},
                     {"route", route},
                     {"attempt", attempt + 1},
                     {"status", a.status},
                     {"outcome", a.error ? std::string(errc_name(a.error->code())) : "ok"},
                     {"request_bytes", payload.size()},
                     {"elapsed_ms", ms.count()}});
    }
    if (!a.error) return std::move(*a.body);
    if (!a.retryable || attempt + 1 >= total) {
      throw BackendError(a.error->code(), a.error->what(), a.error->status(), attempt + 1);
    }
    std::this_thread::sleep_for(backoff_delay(attempt, config_.backoff_base_ms, NextJitter()));
  }
}

TranscriptionResponse HttpTranscriber::transcribe(const TranscriptionRequest& request) {
  auto response = wire::transcription_response_from_json(
      client_.post(wire::kTranscribeRoute, wire::to_json(request), request.video_id));
  check_transcription(request, response);
  return response;
}

DescriptionResponse HttpDescriber::describe_frames(const DescriptionRequest& request) {
  for (const auto& seg : request.segments) {
    if (seg.frames.empty()) {
      throw Error(Errc::EmptyInput, "segment " + std::to_string(seg.segment_index) + " has no frames");
    }
  }
  auto response = wire::description_response_from_json(
      client_.post(wire::kDescribeRoute, wire::to_json(request), request.video_id));
  check_descriptions(request, response);
  return response;
}

ClassifyResponse HttpClassifier::classify(const ClassifyRequest& request) {
  check_prompt_size(request, client_.config().max_prompt_chars);
  auto response = wire::classify_response_from_json(
      client_.post(wire::kClassifyRoute, wire::to_json(request), request.video_id));
  check_classification(response);
  return response;
}

}  // namespace vidcheck::backends
