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

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <semaphore>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "vidcheck/backends/backends.hpp"

namespace vidcheck::backends {

// Delay before retry number `retry` (0-based): base * 2^retry scaled by
// (1 + 0.2 * jitter), jitter in [-1, 1].
std::chrono::milliseconds backoff_delay(int retry, int base_ms, double jitter);

// Caps the number of requests in flight.
class ConcurrencyLimiter {
 public:
  explicit ConcurrencyLimiter(int max_in_flight);

  class Permit {
   public:
    explicit Permit(ConcurrencyLimiter& limiter);
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    ~Permit();

   private:
    ConcurrencyLimiter& limiter_;
  };

  int capacity() const noexcept { return capacity_; }
  int in_flight() const noexcept { return in_flight_.load(); }
  int peak_in_flight() const noexcept { return peak_.load(); }

 private:
  int capacity_;
  std::counting_semaphore<> slots_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
};

// Appends one JSON object per line; shareable across threads.
class AuditLog {
 public:
  explicit AuditLog(const std::filesystem::path& path);
  void write(const nlohmann::json& entry);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

// JSON POST with retry, backoff, in-flight limiting and audit logging.
// Retries on timeouts, transport failures, 429 and 5xx; other failures are
// final. Shareable across threads.
class JsonHttpClient {
 public:
  explicit JsonHttpClient(BackendConfig config);

  nlohmann::json post(std::string_view route, const nlohmann::json& body,
                      const std::string& video_id);

  const BackendConfig& config() const noexcept { return config_; }
  const ConcurrencyLimiter& limiter() const noexcept { return limiter_; }

 private:
  double NextJitter();

  BackendConfig config_;
  std::string scheme_host_port_;
  ConcurrencyLimiter limiter_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  std::unique_ptr<AuditLog> audit_;
};

class HttpTranscriber final : public TranscriptionBackend {
 public:
  explicit HttpTranscriber(BackendConfig config) : client_(std::move(config)) {}
  TranscriptionResponse transcribe(const TranscriptionRequest& request) override;
  const JsonHttpClient& client() const noexcept { return client_; }

 private:
  JsonHttpClient client_;
};

class HttpDescriber final : public DescriptionBackend {
 public:
  explicit HttpDescriber(BackendConfig config) : client_(std::move(config)) {}
  DescriptionResponse describe_frames(const DescriptionRequest& request) override;
  const JsonHttpClient& client() const noexcept { return client_; }

 private:
  JsonHttpClient client_;
};

class HttpClassifier final : public ClassifierBackend {
 public:
  explicit HttpClassifier(BackendConfig config) : client_(std::move(config)) {}
  ClassifyResponse classify(const ClassifyRequest& request) override;
  const JsonHttpClient& client() const noexcept { return client_; }

 private:
  JsonHttpClient client_;
};

}  // namespace vidcheck::backends
