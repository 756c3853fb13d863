#include "mtc/scripted_provider.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mtc {

std::vector<TokenLogProb> uniform_tokens(const std::string& text,
                                         double logprob) {
  std::vector<TokenLogProb> tokens;
  std::string cur;
  for (char c : text) {
    if (c == ' ' && !cur.empty() && cur.back() != ' ') {
      tokens.push_back({cur, logprob});
      cur.clear();
    }
    cur += c;
  }
  if (!cur.empty()) tokens.push_back({cur, logprob});
  return tokens;
}

ScriptedProvider::ScriptedProvider(Script script, bool supports_logprobs,
                                   std::string model_id)
    : script_(std::move(script)),
      supports_logprobs_(supports_logprobs),
      model_id_(std::move(model_id)) {
  for (const auto& [key, entry] : script_) {
    if (!entry.tokens) continue;
    std::string concat;
    for (const auto& t : *entry.tokens) concat += t.token;
    if (concat != entry.text) {
      throw std::invalid_argument(
          "script entry (" + key.first + ", " + std::to_string(key.second) +
          "): token concatenation does not equal the text");
    }
  }
}

ScriptedProvider::Script ScriptedProvider::load_script(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open script file: " + path.string());
  }
  nlohmann::json j;
  in >> j;
  Script script;
  for (const auto& [key, rounds] : j.at("script").items()) {
    int round = 0;
    for (const auto& r : rounds) {
      ScriptEntry entry;
      entry.text = r.at("text").get<std::string>();
      if (r.contains("logprobs")) {
        std::vector<TokenLogProb> tokens;
        for (const auto& t : r.at("logprobs")) {
          tokens.push_back({t.at("token").get<std::string>(),
                            t.at("logprob").get<double>()});
        }
        entry.tokens = std::move(tokens);
      }
      script[{key, round++}] = std::move(entry);
    }
  }
  return script;
}

std::shared_ptr<ScriptedProvider> ScriptedProvider::from_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open script file: " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return std::make_shared<ScriptedProvider>(load_script(path),
                                            j.value("supports_logprobs", true),
                                            j.value("model", "scripted"));
}

ProviderResponse ScriptedProvider::complete(
    const std::vector<ChatMessage>& history, const CompletionOptions& options) {
  validate_history(history);
  int round = 0;
  for (const auto& m : history) {
    if (m.role == Role::Assistant) ++round;
  }
  {
    std::lock_guard lock(mutex_);
    captured_.push_back({options.conversation_key, round, history});
  }

  auto it = script_.find({options.conversation_key, round});
  if (it == script_.end()) {
    throw ScriptMissError("no script entry for (" + options.conversation_key +
                          ", round " + std::to_string(round) + ")");
  }
  const auto& entry = it->second;
  ProviderResponse resp;
  resp.text = entry.text;
  if (options.want_logprobs && supports_logprobs_) resp.tokens = entry.tokens;
  resp.model_id = model_id_;
  // Crude token accounting: one unit per message in, one per response out.
  resp.usage.prompt_tokens = history.size();
  resp.usage.completion_tokens = 1;
  add_usage(resp.usage);
  return resp;
}

std::vector<ScriptedProvider::CapturedRequest>
ScriptedProvider::captured_requests() const {
  std::lock_guard lock(mutex_);
  return captured_;
}

}  // namespace mtc
