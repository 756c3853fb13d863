#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mtc/evaluator.hpp"
#include "mtc/followups.hpp"
#include "mtc/provider.hpp"
#include "mtc/questions.hpp"
#include "mtc/records.hpp"

namespace mtc {

// "[confidence: 0.9731]" — the in-band channel used to expose prior
// certainty to the model during confidence-aware runs.
std::string confidence_annotation(double value);

// Seeded Fisher-Yates permutation of the canonical follow-up order.
std::vector<FollowUpKind> draw_permutation(std::uint64_t trial_seed);

// Drives the multi-turn protocols for one question at a time. Within a
// sequence requests are strictly serial; distinct sequences may run on
// different threads sharing one provider.
class SequenceRunner {
 public:
  SequenceRunner(FollowUpCatalog catalog, Evaluator evaluator,
                 std::shared_ptr<ChatProvider> provider, RunConfig config);

  // Persona system text, with the confidence-annotation instruction
  // appended for confidence-aware runs.
  Persona effective_persona(PersonaKind kind, bool carg) const;

  // Round 0: bare question prompt under the persona system message.
  // Provider errors propagate with the question id attached.
  RoundRecord run_initial(const QuestionItem& item, PersonaKind persona,
                          bool carg = false) const;

  // T rounds of one identical follow-up appended to a growing history.
  // Requires initial.s == 1.
  SequenceRecord run_exp1(const QuestionItem& item, FollowUpKind kind,
                          const RoundRecord& initial,
                          std::uint64_t sequence_seed) const;

  // One conversation covering all 8 kinds in a seeded random order.
  // Requires T == 8 and initial.s == 1.
  SequenceRecord run_exp2(const QuestionItem& item, const RoundRecord& initial,
                          std::uint64_t trial_seed) const;

  // Exp 2 under a Friendly or Adversarial persona (Default is rejected).
  SequenceRecord run_roleplay(const QuestionItem& item, PersonaKind persona,
                              const RoundRecord& initial,
                              std::uint64_t trial_seed) const;

  // Exp 2 with each prior assistant turn annotated with its confidence
  // before the next request is issued. Requires provider logprob support.
  SequenceRecord run_carg(const QuestionItem& item, const RoundRecord& initial,
                          std::uint64_t trial_seed) const;

  const RunConfig& config() const { return config_; }

 private:
  CompletionOptions options_for(const QuestionItem& item) const;
  RoundRecord judge_round(int round, std::string user_text,
                          const ProviderResponse& resp,
                          const QuestionItem& item) const;
  SequenceRecord run_permuted(const QuestionItem& item, PersonaKind persona,
                              bool carg, const RoundRecord& initial,
                              std::uint64_t trial_seed, Protocol protocol) const;

  FollowUpCatalog catalog_;
  Evaluator evaluator_;
  std::shared_ptr<ChatProvider> provider_;
  RunConfig config_;
};

struct CampaignResult {
  std::vector<SequenceRecord> sequences;
  std::vector<std::string> failures;  // questions whose initial round failed
};

struct SeedAssignment {
  std::string question_id;
  int index = 0;  // kind index (exp1) or trial index
  std::uint64_t seed = 0;
};

// Deterministic per-sequence seed: hash(run seed, question id, index).
std::uint64_t sequence_seed(std::uint64_t run_seed, const std::string& qid,
                            int index);

std::vector<SeedAssignment> enumerate_seeds(std::span<const QuestionItem> bank,
                                            Protocol protocol,
                                            const RunConfig& config);

// Batch driver: N questions x (8 kinds | trials). Initially-incorrect
// questions yield one initial-only record; sequence-level provider failures
// become partial records; initial-round failures are aggregated into
// `failures`. Output order is independent of the parallelism bound.
CampaignResult run_campaign(std::span<const QuestionItem> bank,
                            Protocol protocol, const FollowUpCatalog& catalog,
                            const Evaluator& evaluator,
                            std::shared_ptr<ChatProvider> provider,
                            const RunConfig& config);

}  // namespace mtc
