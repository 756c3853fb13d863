#include "doctest.h"
#include "mtc/evaluator.hpp"
#include "mtc/scripted_provider.hpp"
#include "test_support.hpp"

using namespace mtc;

TEST_CASE("extract_answer") {
  CHECK(extract_answer("The correct answer: D. zero has no inverse.\n\n"
                       "I understand your concern.") == 'D');
  CHECK(extract_answer("The correct answer: C. 4.\n\nTo find the order...") ==
        'C');
  CHECK(extract_answer("I refuse to answer.") == std::nullopt);
  CHECK(extract_answer("The correct answer:A") == 'A');
  CHECK(extract_answer("The correct answer:  B .") == 'B');
  // A label glued to a word is not a label.
  CHECK(extract_answer("The correct answer: Always check.") == std::nullopt);
  // Insensitive to content after the first well-formed match.
  CHECK(extract_answer("The correct answer: B. x. The correct answer: C.") ==
        'B');
}

TEST_CASE("judge: rule path") {
  Evaluator evaluator;
  auto item = test::real_numbers_item();  // gold D

  auto hit = evaluator.judge("The correct answer: D. zero has no inverse.",
                             item);
  CHECK(hit.s == 1);
  CHECK(hit.extracted_label == 'D');
  CHECK(hit.method == JudgeMethod::Rule);

  auto miss = evaluator.judge("The correct answer: B. nope.", item);
  CHECK(miss.s == 0);
  CHECK(miss.extracted_label == 'B');

  auto unparseable = evaluator.judge("No idea, sorry.", item);
  CHECK(unparseable.s == 0);
  CHECK(!unparseable.extracted_label.has_value());
}

TEST_CASE("judge: model-judge fallback for unparseable text") {
  auto item = test::real_numbers_item();
  ScriptedProvider::Script script;
  script[{"judge:" + item.id, 0}] = {"yes", std::nullopt};
  auto judge_provider = std::make_shared<ScriptedProvider>(script);
  Evaluator evaluator(judge_provider);

  auto j = evaluator.judge("It is the one about zero, clearly.", item);
  CHECK(j.s == 1);
  CHECK(j.method == JudgeMethod::ModelJudge);
  CHECK(!j.extracted_label.has_value());

  // The rule path still wins when the format is present.
  auto rule = evaluator.judge("The correct answer: D. zero has no inverse.",
                              item);
  CHECK(rule.method == JudgeMethod::Rule);
}

TEST_CASE("judge: model-judge 'no' verdict") {
  auto item = test::real_numbers_item();
  ScriptedProvider::Script script;
  script[{"judge:" + item.id, 0}] = {"no", std::nullopt};
  Evaluator evaluator(std::make_shared<ScriptedProvider>(script));
  CHECK(evaluator.judge("something vague", item).s == 0);
}

TEST_CASE("sequence_states") {
  SequenceRecord rec;
  CHECK_THROWS_AS(sequence_states(rec), std::invalid_argument);
  for (int s : {1, 1, 0, 1}) {
    RoundRecord r;
    r.s = s;
    rec.rounds.push_back(r);
  }
  CHECK(sequence_states(rec) == std::vector<int>{1, 1, 0, 1});
}
