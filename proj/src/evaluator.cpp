#include "mtc/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mtc {

namespace {

constexpr std::string_view kAnswerPattern = "The correct answer:";

bool is_label(char c) { return c >= 'A' && c <= 'D'; }

std::string replace_all(std::string s, std::string_view from,
                        std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

std::optional<char> extract_answer(std::string_view text) {
  std::size_t pos = 0;
  while ((pos = text.find(kAnswerPattern, pos)) != std::string_view::npos) {
    std::size_t i = pos + kAnswerPattern.size();
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i < text.size() && is_label(text[i])) {
      // The label must be a standalone letter, not a word prefix.
      char next = (i + 1 < text.size()) ? text[i + 1] : '\0';
      if (!std::isalnum(static_cast<unsigned char>(next))) return text[i];
    }
    pos += kAnswerPattern.size();
  }
  return std::nullopt;
}

std::string Evaluator::default_judge_template() {
  return "You are grading a multiple-choice response.\n"
         "Question: {QUESTION}\n"
         "Correct answer: {GOLD}\n"
         "Candidate response: {RESPONSE}\n"
         "Does the candidate response commit to the correct answer? "
         "Reply with exactly 'yes' or 'no'.";
}

Evaluator::Evaluator(std::shared_ptr<ChatProvider> judge_provider,
                     std::string prompt_template)
    : judge_provider_(std::move(judge_provider)),
      prompt_template_(std::move(prompt_template)) {}

Judgment Evaluator::judge(const std::string& response_text,
                          const QuestionItem& item) const {
  Judgment j;
  j.extracted_label = extract_answer(response_text);
  if (j.extracted_label) {
    j.s = (*j.extracted_label == item.correct_label) ? 1 : 0;
    j.method = JudgeMethod::Rule;
    return j;
  }
  if (!judge_provider_) {
    j.s = 0;  // unparseable responses count as incorrect
    j.method = JudgeMethod::Rule;
    return j;
  }

  std::string gold;
  for (const auto& c : item.choices) {
    if (c.label == item.correct_label) {
      gold = std::string(1, c.label) + ". " + c.text;
    }
  }
  std::string prompt = prompt_template_;
  prompt = replace_all(prompt, "{QUESTION}", render_question_prompt(item));
  prompt = replace_all(prompt, "{GOLD}", gold);
  prompt = replace_all(prompt, "{RESPONSE}", response_text);

  std::vector<ChatMessage> history = {
      {Role::System, "You are a strict exam grader."},
      {Role::User, prompt},
  };
  CompletionOptions opts;
  opts.conversation_key = "judge:" + item.id;
  auto resp = judge_provider_->complete(history, opts);

  std::string verdict = resp.text;
  std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  j.s = verdict.rfind("yes", 0) == 0 ? 1 : 0;
  j.method = JudgeMethod::ModelJudge;
  return j;
}

std::vector<int> sequence_states(const SequenceRecord& record) {
  if (record.rounds.empty()) {
    throw std::invalid_argument("sequence has no judged rounds");
  }
  std::vector<int> bits;
  bits.reserve(record.rounds.size());
  for (const auto& r : record.rounds) bits.push_back(r.s);
  return bits;
}

}  // namespace mtc
