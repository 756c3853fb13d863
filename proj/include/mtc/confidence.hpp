#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "mtc/provider.hpp"

namespace mtc {

struct ConfidenceScore {
  double value = 1.0;  // exp(mean span logprob), in (0, 1]
  int span_token_count = 0;
};

struct TokenRange {
  std::size_t begin = 0;  // inclusive token index
  std::size_t end = 0;    // exclusive
};

// Finds the smallest token range covering the first "The correct answer: X"
// occurrence (X in {A,B,C,D}) in the concatenated token text. Matching is
// character-offset based so it survives arbitrary tokenizer splits.
// nullopt when the response does not follow the answer format.
std::optional<TokenRange> locate_answer_span(
    std::span<const TokenLogProb> tokens);

// exp of the mean logprob over the span.
ConfidenceScore confidence_score(std::span<const TokenLogProb> span_tokens);

// locate + score over a full response; nullopt when tokens are absent or the
// answer pattern is missing.
std::optional<ConfidenceScore> probe_confidence(const ProviderResponse& resp);

}  // namespace mtc
