#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "mtc/provider.hpp"

namespace mtc {

struct HttpProviderConfig {
  std::string endpoint;  // e.g. "https://api.example.com/v1/chat/completions"
  std::string model;
  std::string api_key;
  std::string wire_system_role = "system";  // some backends use "developer"
  bool logprobs_supported = true;
  int rate_limit_rpm = 60;
  int max_retries = 4;
  double initial_backoff_s = 0.5;
  double max_backoff_s = 8.0;
  int timeout_s = 120;
};

// Blocking token-bucket limiter, shared by concurrent sequence drivers.
class RateLimiter {
 public:
  explicit RateLimiter(int requests_per_minute);
  void acquire();

 private:
  double capacity_;
  double tokens_;
  double refill_per_s_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

// Chat-completions client (OpenAI wire convention). Transient transport
// failures (connect errors, 429, 5xx) are retried with capped exponential
// backoff; 4xx request errors are not.
class HttpProvider final : public ChatProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  ~HttpProvider() override;

  ProviderResponse complete(const std::vector<ChatMessage>& history,
                            const CompletionOptions& options) override;
  bool supports_logprobs() const override {
    return config_.logprobs_supported;
  }
  std::string model_id() const override { return config_.model; }

 private:
  HttpProviderConfig config_;
  std::string origin_;
  std::string path_;
  RateLimiter limiter_;
};

}  // namespace mtc
