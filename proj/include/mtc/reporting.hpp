#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mtc/evaluator.hpp"
#include "mtc/metrics.hpp"
#include "mtc/orchestrator.hpp"
#include "mtc/records.hpp"

namespace mtc {

nlohmann::json sequence_to_json(const SequenceRecord& record);
SequenceRecord sequence_from_json(const nlohmann::json& j);

// The role/content message array for a record (system turn first, then the
// user/assistant turns of each round), using the record's stored system
// role string.
nlohmann::json transcript_to_json(const SequenceRecord& record);

// Builds a judged SequenceRecord from a bare role/content transcript.
// Accepts "developer" as a system-role alias and preserves it for
// re-serialization.
SequenceRecord parse_transcript(const nlohmann::json& messages,
                                const QuestionItem& item,
                                const Evaluator& evaluator,
                                Protocol protocol = Protocol::Exp2);

// Append-only JSON-lines sequence log; appends are serialized through one
// writer so concurrent sequence completion stays crash-safe.
class SequenceLog {
 public:
  explicit SequenceLog(const std::filesystem::path& path);
  void append(const SequenceRecord& record);

 private:
  std::ofstream out_;
  std::mutex mutex_;
};

std::vector<SequenceRecord> load_sequences(const std::filesystem::path& path);

struct SummaryCell {
  std::string run;
  std::string protocol;
  std::string persona;
  std::string kind;  // follow-up kind for exp1 cells, "-" otherwise
  MetricsSummary metrics;
};

// One cell per (protocol, persona, kind). Initial accuracy is computed over
// every question's round 0 within the (protocol, persona) group; the other
// metrics use complete sequences only. Empty cells are omitted.
std::vector<SummaryCell> summarize(std::span<const SequenceRecord> sequences,
                                   double gamma, int T,
                                   const std::string& run_name);

std::string summary_csv(std::span<const SummaryCell> cells, int T);
nlohmann::json summary_json(std::span<const SummaryCell> cells, int T);
std::string per_round_csv(std::span<const SummaryCell> cells);

// Per-question mean position-weighted consistency over complete sequences,
// as (sorted question id, value) pairs. Input for run-vs-run comparison.
std::vector<std::pair<std::string, double>> per_question_pwc(
    std::span<const SequenceRecord> sequences, double gamma);

struct RunPaths {
  std::filesystem::path dir;
  std::filesystem::path manifest() const { return dir / "manifest.json"; }
  std::filesystem::path sequences() const { return dir / "sequences.jsonl"; }
  std::filesystem::path summary_csv_path() const { return dir / "summary.csv"; }
  std::filesystem::path summary_json_path() const {
    return dir / "summary.json";
  }
  std::filesystem::path per_round_csv_path() const {
    return dir / "per_round.csv";
  }
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

// Writes manifest.json, sequences.jsonl and the summary files for a
// finished campaign.
void write_run_artifacts(const RunPaths& paths, Protocol protocol,
                         const RunConfig& config,
                         const std::string& provider_model,
                         const CampaignResult& result);

}  // namespace mtc
