#include "doctest.h"
#include "mtc/scripted_provider.hpp"
#include "test_support.hpp"

using namespace mtc;

namespace {

std::vector<ChatMessage> minimal_history(const std::string& user = "Hello?") {
  return {{Role::System, "system text"}, {Role::User, user}};
}

}  // namespace

TEST_CASE("validate_history") {
  CHECK_NOTHROW(validate_history(minimal_history()));
  CHECK_THROWS_AS(validate_history({}), InvalidRequestError);
  CHECK_THROWS_AS(validate_history({{Role::User, "hi"}}), InvalidRequestError);

  auto not_ending_user = minimal_history();
  not_ending_user.push_back({Role::Assistant, "reply"});
  CHECK_THROWS_AS(validate_history(not_ending_user), InvalidRequestError);

  auto bad_alternation = minimal_history();
  bad_alternation.push_back({Role::User, "again"});
  CHECK_THROWS_AS(validate_history(bad_alternation), InvalidRequestError);
}

TEST_CASE("scripted provider replays deterministically") {
  ScriptedProvider::Script script;
  script[{"q1", 0}] = {"round zero", std::nullopt};
  script[{"q1", 1}] = {"round one", std::nullopt};
  ScriptedProvider provider(script);

  CompletionOptions opts;
  opts.conversation_key = "q1";

  for (int rep = 0; rep < 2; ++rep) {
    auto history = minimal_history();
    auto r0 = provider.complete(history, opts);
    CHECK(r0.text == "round zero");
    history.push_back({Role::Assistant, r0.text});
    history.push_back({Role::User, "follow-up"});
    auto r1 = provider.complete(history, opts);
    CHECK(r1.text == "round one");
  }
}

TEST_CASE("scripted provider errors on a missing round") {
  ScriptedProvider::Script script;
  script[{"q1", 0}] = {"only round", std::nullopt};
  ScriptedProvider provider(script);
  CompletionOptions opts;
  opts.conversation_key = "q1";

  auto history = minimal_history();
  history.push_back({Role::Assistant, "only round"});
  history.push_back({Role::User, "next"});
  CHECK_THROWS_AS(provider.complete(history, opts), ScriptMissError);

  opts.conversation_key = "unknown";
  CHECK_THROWS_AS(provider.complete(minimal_history(), opts), ScriptMissError);
}

TEST_CASE("scripted provider enforces token/text agreement") {
  ScriptedProvider::Script script;
  script[{"q1", 0}] = {"mismatch", uniform_tokens("different text", 0.0)};
  CHECK_THROWS_AS(ScriptedProvider{script}, std::invalid_argument);
}

TEST_CASE("logprobs delivered only when requested and supported") {
  auto item = test::simple_item("q1");
  ScriptedProvider::Script script;
  script[{"q1", 0}] = test::answer_entry('D', item, -0.25);

  CompletionOptions opts;
  opts.conversation_key = "q1";

  SUBCASE("requested") {
    ScriptedProvider provider(script);
    opts.want_logprobs = true;
    auto resp = provider.complete(minimal_history(), opts);
    REQUIRE(resp.tokens.has_value());
    std::string concat;
    for (const auto& t : *resp.tokens) concat += t.token;
    CHECK(concat == resp.text);
  }
  SUBCASE("not requested") {
    ScriptedProvider provider(script);
    opts.want_logprobs = false;
    CHECK(!provider.complete(minimal_history(), opts).tokens.has_value());
  }
  SUBCASE("unsupported backend") {
    ScriptedProvider provider(script, /*supports_logprobs=*/false);
    opts.want_logprobs = true;
    CHECK(!provider.complete(minimal_history(), opts).tokens.has_value());
  }
}

TEST_CASE("usage counters accumulate across calls") {
  ScriptedProvider::Script script;
  script[{"q1", 0}] = {"reply", std::nullopt};
  ScriptedProvider provider(script);
  CompletionOptions opts;
  opts.conversation_key = "q1";

  auto before = provider.total_usage();
  provider.complete(minimal_history(), opts);
  provider.complete(minimal_history(), opts);
  auto after = provider.total_usage();
  CHECK(after.prompt_tokens >= before.prompt_tokens + 2);
  CHECK(after.completion_tokens == before.completion_tokens + 2);
}

TEST_CASE("uniform_tokens concatenation equals the source text") {
  std::string text = "The correct answer: D. zero has no inverse.";
  auto tokens = uniform_tokens(text, -0.1);
  std::string concat;
  for (const auto& t : tokens) concat += t.token;
  CHECK(concat == text);
  CHECK(tokens.size() > 1);
}
