#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtc {

enum class Role { System, User, Assistant };

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

struct TokenLogProb {
  std::string token;
  double logprob = 0.0;  // natural log, <= 0
};

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

struct ProviderResponse {
  std::string text;
  std::optional<std::vector<TokenLogProb>> tokens;
  std::string model_id;
  Usage usage;
};

struct CompletionOptions {
  double temperature = 0.0;
  int max_tokens = 1024;
  bool want_logprobs = false;
  // Identifies the conversation for providers that replay scripts; remote
  // providers ignore it.
  std::string conversation_key;
};

struct ProviderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Network / HTTP 5xx after retries.
struct TransportError : ProviderError {
  using ProviderError::ProviderError;
};
struct AuthError : ProviderError {
  using ProviderError::ProviderError;
};
// Malformed request (including history precondition violations); not retried.
struct InvalidRequestError : ProviderError {
  using ProviderError::ProviderError;
};
// The backend cannot produce token logprobs; confidence probing degrades.
struct LogprobsUnsupportedError : ProviderError {
  using ProviderError::ProviderError;
};

// Throws InvalidRequestError unless the history starts with a system message
// and alternates user/assistant thereafter, ending in a user message.
void validate_history(const std::vector<ChatMessage>& history);

std::string_view role_name(Role role);
std::optional<Role> role_from_name(std::string_view s);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  virtual ProviderResponse complete(const std::vector<ChatMessage>& history,
                                    const CompletionOptions& options) = 0;
  virtual bool supports_logprobs() const = 0;
  virtual std::string model_id() const = 0;

  Usage total_usage() const {
    return {prompt_tokens_.load(), completion_tokens_.load()};
  }

 protected:
  void add_usage(const Usage& u) {
    prompt_tokens_ += u.prompt_tokens;
    completion_tokens_ += u.completion_tokens;
  }

 private:
  std::atomic<std::uint64_t> prompt_tokens_{0};
  std::atomic<std::uint64_t> completion_tokens_{0};
};

}  // namespace mtc
