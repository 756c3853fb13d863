#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtc/provider.hpp"
#include "mtc/questions.hpp"
#include "mtc/records.hpp"

namespace mtc {

enum class JudgeMethod { Rule, ModelJudge };

struct Judgment {
  std::optional<char> extracted_label;
  int s = 0;
  JudgeMethod method = JudgeMethod::Rule;
};

// Label following the first well-formed "The correct answer: X" occurrence;
// tolerates surrounding whitespace and a trailing period.
std::optional<char> extract_answer(std::string_view response_text);

// Rule-based correctness judge with an optional model-judge fallback for
// responses the rule cannot parse.
class Evaluator {
 public:
  Evaluator() = default;
  Evaluator(std::shared_ptr<ChatProvider> judge_provider,
            std::string prompt_template = default_judge_template());

  static std::string default_judge_template();

  Judgment judge(const std::string& response_text,
                 const QuestionItem& item) const;

 private:
  std::shared_ptr<ChatProvider> judge_provider_;
  std::string prompt_template_;
};

// Binary correctness vector in round order. Throws std::invalid_argument if
// the record has no rounds.
std::vector<int> sequence_states(const SequenceRecord& record);

}  // namespace mtc
