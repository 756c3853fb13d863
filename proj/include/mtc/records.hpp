#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtc/confidence.hpp"
#include "mtc/followups.hpp"

namespace mtc {

enum class Protocol { Exp1, Exp2, Roleplay, Carg };

std::string_view protocol_name(Protocol p);
std::optional<Protocol> protocol_from_name(std::string_view s);

struct RoundRecord {
  int round = 0;
  std::string user_text;
  std::string response_text;
  std::optional<char> extracted_label;
  int s = 0;  // correctness bit
  std::optional<ConfidenceScore> confidence;
};

enum class SequenceStatus {
  Complete,     // rounds 0..T all present
  Partial,      // aborted mid-run; abort_reason is set
  InitialOnly,  // excluded after an incorrect round 0
};

std::string_view sequence_status_name(SequenceStatus s);
std::optional<SequenceStatus> sequence_status_from_name(std::string_view s);

// A full multi-turn conversation for one question under one protocol.
struct SequenceRecord {
  std::string question_id;
  Protocol protocol = Protocol::Exp1;
  std::optional<FollowUpKind> followup_kind;              // exp1 only
  std::optional<std::vector<FollowUpKind>> permutation;   // exp2 family
  PersonaKind persona = PersonaKind::Default;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  SequenceStatus status = SequenceStatus::Complete;
  std::string abort_reason;
  std::string system_text;
  // Role string the transcript uses for the system turn; preserved through
  // parse/serialize round-trips of external logs.
  std::string system_role_name = "system";
};

struct RunConfig {
  double gamma = 0.45;
  int T = 8;
  int trials = 1;
  std::uint64_t seed = 0;
  PersonaKind persona = PersonaKind::Default;
  bool carg_enabled = false;
  int parallelism = 1;
  double temperature = 0.0;
  int max_tokens = 1024;
  std::string run_name = "run";

  // Throws std::invalid_argument on out-of-range values
  // (gamma outside (0, 1/2), T < 1, trials < 1, parallelism < 1).
  void validate() const;
};

}  // namespace mtc
