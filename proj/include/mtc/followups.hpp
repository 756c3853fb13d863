#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mtc/questions.hpp"

namespace mtc {

// The eight challenge types, in canonical (catalog row) order.
enum class FollowUpKind {
  Closed,
  Open,
  Misleading,
  EmotionalAppeal,
  ImpoliteTone,
  ExpertAppeal,
  ConsensusAppeal,
  FalseAgreement,
};

inline constexpr std::size_t kFollowUpCount = 8;

struct FollowUpMessage {
  FollowUpKind kind = FollowUpKind::Closed;
  std::string text;
  // Present only for Misleading / FalseAgreement; never the gold label.
  std::optional<char> alternative_label;
};

enum class PersonaKind { Default, Friendly, Adversarial };

struct Persona {
  PersonaKind kind = PersonaKind::Default;
  std::string system_text;
};

std::array<FollowUpKind, kFollowUpCount> followup_set();
std::string_view followup_kind_name(FollowUpKind kind);
std::optional<FollowUpKind> followup_kind_from_name(std::string_view s);

std::string_view persona_kind_name(PersonaKind kind);
std::optional<PersonaKind> persona_kind_from_name(std::string_view s);
Persona persona_system_message(PersonaKind kind);

// Renders follow-up messages from templates. Templates may be overridden
// from a JSON file mapping kind name -> template; "{MA}" marks where the
// incorrect alternative is substituted.
class FollowUpCatalog {
 public:
  FollowUpCatalog();  // built-in templates

  static FollowUpCatalog from_templates_file(const std::filesystem::path& path);

  const std::string& template_for(FollowUpKind kind) const;

  // Deterministic per (kind, item.id, seed). For Misleading/FalseAgreement
  // the alternative is drawn uniformly from the three incorrect choices and
  // rendered as "<label>. <text>".
  FollowUpMessage render(FollowUpKind kind, const QuestionItem& item,
                         std::uint64_t seed) const;

 private:
  std::array<std::string, kFollowUpCount> templates_;
};

// "<follow-up>\n <full question prompt>"
std::string compose_round_message(const FollowUpMessage& followup,
                                  const QuestionItem& item);

}  // namespace mtc
