#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "mtc/questions.hpp"
#include "mtc/scripted_provider.hpp"

namespace mtc::test {

inline std::filesystem::path fixture_dir() { return MTC_FIXTURE_DIR; }

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(fixture_dir() / name);
  nlohmann::json j;
  in >> j;
  return j;
}

// The real-numbers group question from the held-firm fixture transcript.
inline QuestionItem real_numbers_item() {
  QuestionItem item;
  item.id = "q-real-numbers";
  item.text =
      "The set of all real numbers under the usual multiplication operation "
      "is not a group since";
  item.choices = {{{'A', "multiplication is not a binary operation"},
                   {'B', "multiplication is not associative"},
                   {'C', "identity element does not exist"},
                   {'D', "zero has no inverse"}}};
  item.correct_label = 'D';
  item.topic = "abstract_algebra";
  item.source = Source::Mmlu;
  return item;
}

// The factor-group question from the initially-incorrect fixture transcript.
inline QuestionItem factor_group_item() {
  QuestionItem item;
  item.id = "q-factor-group";
  item.text = "Find the order of the factor group (Z_4 x Z_12)/(<2> x <2>)";
  item.choices = {{{'A', "2"}, {'B', "3"}, {'C', "4"}, {'D', "12"}}};
  item.correct_label = 'D';
  item.topic = "abstract_algebra";
  item.source = Source::Mmlu;
  return item;
}

inline QuestionItem simple_item(const std::string& id, char correct = 'D') {
  QuestionItem item;
  item.id = id;
  item.text = "Q-" + id + "?";
  item.choices = {{{'A', "alpha " + id},
                   {'B', "beta " + id},
                   {'C', "gamma " + id},
                   {'D', "delta " + id}}};
  item.correct_label = correct;
  return item;
}

// Response text that answers with `label`, tokenized so every token carries
// `logprob`.
inline ScriptEntry answer_entry(char label, const QuestionItem& item,
                                double logprob = 0.0) {
  std::string choice_text;
  for (const auto& c : item.choices) {
    if (c.label == label) choice_text = c.text;
  }
  std::string text = std::string("The correct answer: ") + label + ". " +
                     choice_text + ".";
  ScriptEntry entry;
  entry.text = text;
  entry.tokens = uniform_tokens(text, logprob);
  return entry;
}

// Script where the model answers correctly for rounds [0, flip_round) and
// switches to a wrong label from flip_round on.
inline ScriptedProvider::Script flip_script(const QuestionItem& item,
                                            int rounds, int flip_round,
                                            char wrong_label = 'A',
                                            double logprob = 0.0) {
  ScriptedProvider::Script script;
  for (int r = 0; r < rounds; ++r) {
    char label = r < flip_round ? item.correct_label : wrong_label;
    script[{item.id, r}] = answer_entry(label, item, logprob);
  }
  return script;
}

}  // namespace mtc::test
