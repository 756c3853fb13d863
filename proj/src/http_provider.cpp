#include "mtc/http_provider.hpp"

#include <algorithm>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace mtc {

namespace {

// Splits "scheme://host[:port]/path" into origin and path.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint must include a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/v1/chat/completions"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

RateLimiter::RateLimiter(int requests_per_minute)
    : capacity_(std::max(1, requests_per_minute)),
      tokens_(capacity_),
      refill_per_s_(capacity_ / 60.0),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    std::chrono::duration<double> elapsed = now - last_;
    last_ = now;
    tokens_ = std::min(capacity_, tokens_ + elapsed.count() * refill_per_s_);
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    double wait_s = (1.0 - tokens_) / refill_per_s_;
    lock.unlock();
    std::this_thread::sleep_for(std::chrono::duration<double>(wait_s));
    lock.lock();
  }
}

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)), limiter_(config_.rate_limit_rpm) {
  std::tie(origin_, path_) = split_endpoint(config_.endpoint);
}

HttpProvider::~HttpProvider() = default;

ProviderResponse HttpProvider::complete(
    const std::vector<ChatMessage>& history, const CompletionOptions& options) {
  validate_history(history);

  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : history) {
    std::string role = m.role == Role::System
                           ? config_.wire_system_role
                           : std::string(role_name(m.role));
    messages.push_back({{"role", role}, {"content", m.content}});
  }
  nlohmann::json body = {
      {"model", config_.model},
      {"messages", messages},
      {"temperature", options.temperature},
      {"max_tokens", options.max_tokens},
  };
  if (options.want_logprobs && config_.logprobs_supported) {
    body["logprobs"] = true;
  }
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  double backoff = config_.initial_backoff_s;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff = std::min(backoff * 2.0, config_.max_backoff_s);
    }
    limiter_.acquire();

    httplib::Client client(origin_);
    client.set_read_timeout(config_.timeout_s, 0);
    client.set_connection_timeout(config_.timeout_s, 0);
    auto res = client.Post(path_, headers, payload, "application/json");

    if (!res) {
      last_error = "connection failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("authentication failed (HTTP " +
                      std::to_string(res->status) + ")");
    }
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw InvalidRequestError("HTTP " + std::to_string(res->status) + ": " +
                                res->body);
    }

    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) {
      last_error = "unparseable response body";
      continue;
    }
    const auto& choice = j.at("choices").at(0);
    ProviderResponse out;
    out.text = choice.at("message").at("content").get<std::string>();
    out.model_id = j.value("model", config_.model);
    if (j.contains("usage")) {
      out.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
      out.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
    if (options.want_logprobs && choice.contains("logprobs") &&
        !choice["logprobs"].is_null() &&
        choice["logprobs"].contains("content")) {
      std::vector<TokenLogProb> tokens;
      for (const auto& t : choice["logprobs"]["content"]) {
        tokens.push_back({t.at("token").get<std::string>(),
                          t.at("logprob").get<double>()});
      }
      out.tokens = std::move(tokens);
    }
    add_usage(out.usage);
    return out;
  }
  throw TransportError("request failed after " +
                       std::to_string(config_.max_retries + 1) +
                       " attempts: " + last_error);
}

}  // namespace mtc
