#include "mtc/records.hpp"

#include <stdexcept>

namespace mtc {

std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::Exp1: return "exp1";
    case Protocol::Exp2: return "exp2";
    case Protocol::Roleplay: return "roleplay";
    case Protocol::Carg: return "carg";
  }
  return "exp1";
}

std::optional<Protocol> protocol_from_name(std::string_view s) {
  if (s == "exp1") return Protocol::Exp1;
  if (s == "exp2") return Protocol::Exp2;
  if (s == "roleplay") return Protocol::Roleplay;
  if (s == "carg") return Protocol::Carg;
  return std::nullopt;
}

std::string_view sequence_status_name(SequenceStatus s) {
  switch (s) {
    case SequenceStatus::Complete: return "complete";
    case SequenceStatus::Partial: return "partial";
    case SequenceStatus::InitialOnly: return "initial-only";
  }
  return "complete";
}

std::optional<SequenceStatus> sequence_status_from_name(std::string_view s) {
  if (s == "complete") return SequenceStatus::Complete;
  if (s == "partial") return SequenceStatus::Partial;
  if (s == "initial-only") return SequenceStatus::InitialOnly;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("gamma must lie in (0, 1/2)");
  }
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
}

}  // namespace mtc
