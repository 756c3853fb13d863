#include "mtc/confidence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mtc {

namespace {

constexpr std::string_view kPattern = "The correct answer:";

bool is_label(char c) { return c >= 'A' && c <= 'D'; }

// Character span [begin, end) of the pattern plus the label.
std::optional<std::pair<std::size_t, std::size_t>> find_pattern_chars(
    const std::string& text) {
  std::size_t pos = 0;
  while ((pos = text.find(kPattern, pos)) != std::string::npos) {
    std::size_t i = pos + kPattern.size();
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i < text.size() && is_label(text[i])) {
      return std::make_pair(pos, i + 1);
    }
    pos += kPattern.size();
  }
  return std::nullopt;
}

}  // namespace

std::optional<TokenRange> locate_answer_span(
    std::span<const TokenLogProb> tokens) {
  if (tokens.empty()) return std::nullopt;

  std::string concat;
  std::vector<std::size_t> offsets;  // offsets[i] = start of token i
  offsets.reserve(tokens.size());
  for (const auto& t : tokens) {
    offsets.push_back(concat.size());
    concat += t.token;
  }

  auto chars = find_pattern_chars(concat);
  if (!chars) return std::nullopt;
  auto [begin_char, end_char] = *chars;

  TokenRange range;
  range.begin = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t tok_begin = offsets[i];
    std::size_t tok_end = tok_begin + tokens[i].token.size();
    if (tok_end > begin_char && tok_begin < end_char) {
      range.begin = std::min(range.begin, i);
      range.end = i + 1;
    }
  }
  return range;
}

ConfidenceScore confidence_score(std::span<const TokenLogProb> span_tokens) {
  if (span_tokens.empty()) {
    throw std::invalid_argument("confidence span is empty");
  }
  double sum = 0.0;
  for (const auto& t : span_tokens) sum += t.logprob;
  ConfidenceScore score;
  score.span_token_count = static_cast<int>(span_tokens.size());
  score.value = std::exp(sum / static_cast<double>(span_tokens.size()));
  return score;
}

std::optional<ConfidenceScore> probe_confidence(const ProviderResponse& resp) {
  if (!resp.tokens) return std::nullopt;
  auto range = locate_answer_span(*resp.tokens);
  if (!range) return std::nullopt;
  return confidence_score(std::span<const TokenLogProb>(
      resp.tokens->data() + range->begin, range->end - range->begin));
}

}  // namespace mtc
