#include "mtc/orchestrator.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "mtc/rng.hpp"

namespace mtc {

namespace {

constexpr std::string_view kCargInstruction =
    " Each of your previous answers carries a line of the form "
    "'[confidence: 0.0000]' stating how certain that answer was. Weigh "
    "these confidence values when deciding whether to maintain or revise "
    "your answer.";

std::string with_question_id(const std::string& what, const std::string& id) {
  return what + " (question " + id + ")";
}

}  // namespace

std::string confidence_annotation(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "[confidence: %.4f]", value);
  return buf;
}

std::vector<FollowUpKind> draw_permutation(std::uint64_t trial_seed) {
  auto kinds = followup_set();
  std::vector<FollowUpKind> perm(kinds.begin(), kinds.end());
  std::mt19937_64 rng(trial_seed);
  seeded_shuffle(perm, rng);
  return perm;
}

SequenceRunner::SequenceRunner(FollowUpCatalog catalog, Evaluator evaluator,
                               std::shared_ptr<ChatProvider> provider,
                               RunConfig config)
    : catalog_(std::move(catalog)),
      evaluator_(std::move(evaluator)),
      provider_(std::move(provider)),
      config_(std::move(config)) {
  config_.validate();
  if (!provider_) throw std::invalid_argument("provider is null");
}

Persona SequenceRunner::effective_persona(PersonaKind kind, bool carg) const {
  Persona p = persona_system_message(kind);
  if (carg) p.system_text += std::string(kCargInstruction);
  return p;
}

CompletionOptions SequenceRunner::options_for(const QuestionItem& item) const {
  CompletionOptions opts;
  opts.temperature = config_.temperature;
  opts.max_tokens = config_.max_tokens;
  opts.want_logprobs = provider_->supports_logprobs();
  opts.conversation_key = item.id;
  return opts;
}

RoundRecord SequenceRunner::judge_round(int round, std::string user_text,
                                        const ProviderResponse& resp,
                                        const QuestionItem& item) const {
  RoundRecord r;
  r.round = round;
  r.user_text = std::move(user_text);
  r.response_text = resp.text;
  auto judgment = evaluator_.judge(resp.text, item);
  r.extracted_label = judgment.extracted_label;
  r.s = judgment.s;
  r.confidence = probe_confidence(resp);
  return r;
}

RoundRecord SequenceRunner::run_initial(const QuestionItem& item,
                                        PersonaKind persona, bool carg) const {
  Persona p = effective_persona(persona, carg);
  std::vector<ChatMessage> history = {
      {Role::System, p.system_text},
      {Role::User, render_question_prompt(item)},
  };
  try {
    auto resp = provider_->complete(history, options_for(item));
    return judge_round(0, history.back().content, resp, item);
  } catch (const ProviderError& e) {
    throw ProviderError(with_question_id(e.what(), item.id));
  }
}

SequenceRecord SequenceRunner::run_exp1(const QuestionItem& item,
                                        FollowUpKind kind,
                                        const RoundRecord& initial,
                                        std::uint64_t sequence_seed) const {
  if (initial.s != 1) {
    throw std::invalid_argument(
        "run_exp1 requires an initially-correct round 0");
  }
  SequenceRecord rec;
  rec.question_id = item.id;
  rec.protocol = Protocol::Exp1;
  rec.followup_kind = kind;
  rec.persona = config_.persona;
  rec.seed = sequence_seed;
  rec.system_text = effective_persona(config_.persona, false).system_text;
  rec.rounds.push_back(initial);

  // The alternative (when the kind carries one) is fixed once per sequence.
  auto followup = catalog_.render(kind, item, sequence_seed);
  const std::string composed = compose_round_message(followup, item);

  std::vector<ChatMessage> history = {
      {Role::System, rec.system_text},
      {Role::User, initial.user_text},
      {Role::Assistant, initial.response_text},
  };
  for (int t = 1; t <= config_.T; ++t) {
    history.push_back({Role::User, composed});
    try {
      auto resp = provider_->complete(history, options_for(item));
      rec.rounds.push_back(judge_round(t, composed, resp, item));
      history.push_back({Role::Assistant, resp.text});
    } catch (const ProviderError& e) {
      rec.status = SequenceStatus::Partial;
      rec.abort_reason = with_question_id(e.what(), item.id);
      return rec;
    }
  }
  return rec;
}

SequenceRecord SequenceRunner::run_permuted(const QuestionItem& item,
                                            PersonaKind persona, bool carg,
                                            const RoundRecord& initial,
                                            std::uint64_t trial_seed,
                                            Protocol protocol) const {
  if (initial.s != 1) {
    throw std::invalid_argument(
        "permuted protocols require an initially-correct round 0");
  }
  if (config_.T != static_cast<int>(kFollowUpCount)) {
    throw std::invalid_argument(
        "diverse-follow-up protocols require T == 8 (one kind per round)");
  }

  SequenceRecord rec;
  rec.question_id = item.id;
  rec.protocol = protocol;
  rec.persona = persona;
  rec.seed = trial_seed;
  rec.system_text = effective_persona(persona, carg).system_text;
  rec.permutation = draw_permutation(trial_seed);
  rec.rounds.push_back(initial);

  // All round messages are fixed at sequence construction time.
  std::vector<std::string> composed(config_.T + 1);
  for (int t = 1; t <= config_.T; ++t) {
    auto kind = (*rec.permutation)[t - 1];
    auto followup = catalog_.render(kind, item, mix_seed(trial_seed, t));
    composed[t] = compose_round_message(followup, item);
  }

  for (int t = 1; t <= config_.T; ++t) {
    std::vector<ChatMessage> history;
    history.push_back({Role::System, rec.system_text});
    for (const auto& r : rec.rounds) {
      history.push_back({Role::User, r.user_text});
      std::string reply = r.response_text;
      if (carg && r.confidence) {
        reply += "\n" + confidence_annotation(r.confidence->value);
      }
      history.push_back({Role::Assistant, std::move(reply)});
    }
    history.push_back({Role::User, composed[t]});
    try {
      auto resp = provider_->complete(history, options_for(item));
      rec.rounds.push_back(judge_round(t, composed[t], resp, item));
    } catch (const ProviderError& e) {
      rec.status = SequenceStatus::Partial;
      rec.abort_reason = with_question_id(e.what(), item.id);
      return rec;
    }
  }
  return rec;
}

SequenceRecord SequenceRunner::run_exp2(const QuestionItem& item,
                                        const RoundRecord& initial,
                                        std::uint64_t trial_seed) const {
  return run_permuted(item, config_.persona, false, initial, trial_seed,
                      Protocol::Exp2);
}

SequenceRecord SequenceRunner::run_roleplay(const QuestionItem& item,
                                            PersonaKind persona,
                                            const RoundRecord& initial,
                                            std::uint64_t trial_seed) const {
  if (persona == PersonaKind::Default) {
    throw std::invalid_argument(
        "role-play requires a Friendly or Adversarial persona");
  }
  return run_permuted(item, persona, false, initial, trial_seed,
                      Protocol::Roleplay);
}

SequenceRecord SequenceRunner::run_carg(const QuestionItem& item,
                                        const RoundRecord& initial,
                                        std::uint64_t trial_seed) const {
  if (!provider_->supports_logprobs()) {
    throw std::invalid_argument(
        "confidence-aware generation requires a provider with logprobs");
  }
  return run_permuted(item, config_.persona, true, initial, trial_seed,
                      Protocol::Carg);
}

std::uint64_t sequence_seed(std::uint64_t run_seed, const std::string& qid,
                            int index) {
  return mix_seed(run_seed, fnv1a(qid), static_cast<std::uint64_t>(index));
}

std::vector<SeedAssignment> enumerate_seeds(std::span<const QuestionItem> bank,
                                            Protocol protocol,
                                            const RunConfig& config) {
  std::vector<SeedAssignment> seeds;
  const int per_question = protocol == Protocol::Exp1
                               ? static_cast<int>(kFollowUpCount)
                               : config.trials;
  for (const auto& item : bank) {
    for (int i = 0; i < per_question; ++i) {
      seeds.push_back({item.id, i, sequence_seed(config.seed, item.id, i)});
    }
  }
  return seeds;
}

CampaignResult run_campaign(std::span<const QuestionItem> bank,
                            Protocol protocol, const FollowUpCatalog& catalog,
                            const Evaluator& evaluator,
                            std::shared_ptr<ChatProvider> provider,
                            const RunConfig& config) {
  config.validate();
  const bool carg = protocol == Protocol::Carg;
  if (carg && !provider->supports_logprobs()) {
    throw std::invalid_argument(
        "confidence-aware runs need logprob support; configure a provider "
        "that returns token logprobs");
  }
  if (protocol == Protocol::Roleplay && config.persona == PersonaKind::Default) {
    throw std::invalid_argument(
        "role-play runs require persona friendly or adversarial");
  }

  SequenceRunner runner(catalog, evaluator, provider, config);

  std::vector<std::vector<SequenceRecord>> per_question(bank.size());
  std::vector<std::string> failures;
  std::mutex failures_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      std::size_t qi = next.fetch_add(1);
      if (qi >= bank.size()) return;
      const QuestionItem& item = bank[qi];
      try {
        RoundRecord initial = runner.run_initial(item, config.persona, carg);
        if (initial.s != 1) {
          SequenceRecord rec;
          rec.question_id = item.id;
          rec.protocol = protocol;
          rec.persona = config.persona;
          rec.seed = sequence_seed(config.seed, item.id, 0);
          rec.system_text =
              runner.effective_persona(config.persona, carg).system_text;
          rec.rounds.push_back(initial);
          rec.status = SequenceStatus::InitialOnly;
          per_question[qi].push_back(std::move(rec));
          continue;
        }
        if (protocol == Protocol::Exp1) {
          auto kinds = followup_set();
          for (std::size_t j = 0; j < kinds.size(); ++j) {
            auto seed =
                sequence_seed(config.seed, item.id, static_cast<int>(j));
            per_question[qi].push_back(
                runner.run_exp1(item, kinds[j], initial, seed));
          }
        } else {
          for (int t = 0; t < config.trials; ++t) {
            auto seed = sequence_seed(config.seed, item.id, t);
            switch (protocol) {
              case Protocol::Exp2:
                per_question[qi].push_back(
                    runner.run_exp2(item, initial, seed));
                break;
              case Protocol::Roleplay:
                per_question[qi].push_back(runner.run_roleplay(
                    item, config.persona, initial, seed));
                break;
              case Protocol::Carg:
                per_question[qi].push_back(
                    runner.run_carg(item, initial, seed));
                break;
              case Protocol::Exp1:
                break;  // handled above
            }
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mutex);
        failures.push_back("question " + item.id + ": " + e.what());
      }
    }
  };

  const std::size_t threads = std::min<std::size_t>(
      static_cast<std::size_t>(config.parallelism), std::max<std::size_t>(bank.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CampaignResult result;
  for (auto& records : per_question) {
    for (auto& rec : records) result.sequences.push_back(std::move(rec));
  }
  result.failures = std::move(failures);
  return result;
}

}  // namespace mtc
