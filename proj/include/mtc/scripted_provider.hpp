#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "mtc/provider.hpp"

namespace mtc {

// Raised when a scripted conversation has no entry for a requested round.
struct ScriptMissError : ProviderError {
  using ProviderError::ProviderError;
};

struct ScriptEntry {
  std::string text;
  std::optional<std::vector<TokenLogProb>> tokens;
};

// Splits text into whitespace-prefixed word tokens, each carrying the same
// logprob. Handy for building script fixtures whose token concatenation
// equals the text.
std::vector<TokenLogProb> uniform_tokens(const std::string& text,
                                         double logprob);

// Deterministic stand-in model: replays predefined responses keyed by
// (conversation key, round index). The round index is the number of
// assistant messages already in the history.
class ScriptedProvider final : public ChatProvider {
 public:
  using Script = std::map<std::pair<std::string, int>, ScriptEntry>;

  explicit ScriptedProvider(Script script, bool supports_logprobs = true,
                            std::string model_id = "scripted");

  // File shape: {"supports_logprobs": bool, "model": str,
  //              "script": {"<key>": [{"text": str, "logprobs":
  //                [{"token": str, "logprob": num}, ...]}, ...]}}
  static Script load_script(const std::filesystem::path& path);
  static std::shared_ptr<ScriptedProvider> from_file(
      const std::filesystem::path& path);

  ProviderResponse complete(const std::vector<ChatMessage>& history,
                            const CompletionOptions& options) override;
  bool supports_logprobs() const override { return supports_logprobs_; }
  std::string model_id() const override { return model_id_; }

  struct CapturedRequest {
    std::string conversation_key;
    int round = 0;
    std::vector<ChatMessage> history;
  };
  std::vector<CapturedRequest> captured_requests() const;

 private:
  Script script_;
  bool supports_logprobs_;
  std::string model_id_;
  mutable std::mutex mutex_;
  std::vector<CapturedRequest> captured_;
};

}  // namespace mtc
