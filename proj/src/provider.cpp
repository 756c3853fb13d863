#include "mtc/provider.hpp"

namespace mtc {

void validate_history(const std::vector<ChatMessage>& history) {
  if (history.empty()) {
    throw InvalidRequestError("history is empty");
  }
  if (history.front().role != Role::System) {
    throw InvalidRequestError("history must start with a system message");
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (history[i].content.empty()) {
      throw InvalidRequestError("message " + std::to_string(i) + " is empty");
    }
    if (i == 0) continue;
    Role expected = (i % 2 == 1) ? Role::User : Role::Assistant;
    if (history[i].role != expected) {
      throw InvalidRequestError(
          "history must alternate user/assistant after the system message");
    }
  }
  if (history.back().role != Role::User) {
    throw InvalidRequestError("history must end with a user message");
  }
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> role_from_name(std::string_view s) {
  if (s == "system" || s == "developer") return Role::System;
  if (s == "user") return Role::User;
  if (s == "assistant") return Role::Assistant;
  return std::nullopt;
}

}  // namespace mtc
