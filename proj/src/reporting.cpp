#include "mtc/reporting.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace mtc {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

nlohmann::json round_to_json(const RoundRecord& r) {
  nlohmann::json j;
  j["round"] = r.round;
  j["extracted_label"] =
      r.extracted_label ? nlohmann::json(std::string(1, *r.extracted_label))
                        : nlohmann::json(nullptr);
  j["s"] = r.s;
  if (r.confidence) {
    j["confidence"] = r.confidence->value;
    j["confidence_tokens"] = r.confidence->span_token_count;
  } else {
    j["confidence"] = nullptr;
  }
  return j;
}

RoundRecord round_from_json(const nlohmann::json& j) {
  RoundRecord r;
  r.round = j.at("round").get<int>();
  if (!j.at("extracted_label").is_null()) {
    auto label = j["extracted_label"].get<std::string>();
    if (!label.empty()) r.extracted_label = label[0];
  }
  r.s = j.at("s").get<int>();
  if (j.contains("confidence") && !j["confidence"].is_null()) {
    ConfidenceScore c;
    c.value = j["confidence"].get<double>();
    c.span_token_count = j.value("confidence_tokens", 0);
    r.confidence = c;
  }
  return r;
}

int kind_order_index(const std::string& kind) {
  if (kind == "-") return -1;
  auto k = followup_kind_from_name(kind);
  return k ? static_cast<int>(*k) : 99;
}

std::string iso_timestamp_now() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

}  // namespace

nlohmann::json transcript_to_json(const SequenceRecord& record) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back(
      {{"role", record.system_role_name}, {"content", record.system_text}});
  for (const auto& r : record.rounds) {
    messages.push_back({{"role", "user"}, {"content", r.user_text}});
    messages.push_back({{"role", "assistant"}, {"content", r.response_text}});
  }
  return messages;
}

nlohmann::json sequence_to_json(const SequenceRecord& record) {
  nlohmann::json j;
  j["question_id"] = record.question_id;
  j["protocol"] = protocol_name(record.protocol);
  j["persona"] = persona_kind_name(record.persona);
  j["seed"] = record.seed;
  j["status"] = sequence_status_name(record.status);
  if (record.status == SequenceStatus::Partial) {
    j["abort_reason"] = record.abort_reason;
  }
  if (record.followup_kind) {
    j["followup_kind"] = followup_kind_name(*record.followup_kind);
  }
  if (record.permutation) {
    nlohmann::json perm = nlohmann::json::array();
    for (auto k : *record.permutation) perm.push_back(followup_kind_name(k));
    j["permutation"] = perm;
  }
  j["system_role"] = record.system_role_name;
  j["messages"] = transcript_to_json(record);
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : record.rounds) rounds.push_back(round_to_json(r));
  j["rounds"] = rounds;
  return j;
}

SequenceRecord sequence_from_json(const nlohmann::json& j) {
  SequenceRecord rec;
  rec.question_id = j.at("question_id").get<std::string>();
  if (auto p = protocol_from_name(j.at("protocol").get<std::string>())) {
    rec.protocol = *p;
  } else {
    throw std::invalid_argument("unknown protocol in sequence record");
  }
  if (auto p = persona_kind_from_name(j.at("persona").get<std::string>())) {
    rec.persona = *p;
  }
  rec.seed = j.at("seed").get<std::uint64_t>();
  if (auto s = sequence_status_from_name(j.at("status").get<std::string>())) {
    rec.status = *s;
  }
  rec.abort_reason = j.value("abort_reason", "");
  if (j.contains("followup_kind")) {
    rec.followup_kind =
        followup_kind_from_name(j["followup_kind"].get<std::string>());
  }
  if (j.contains("permutation")) {
    std::vector<FollowUpKind> perm;
    for (const auto& name : j["permutation"]) {
      if (auto k = followup_kind_from_name(name.get<std::string>())) {
        perm.push_back(*k);
      }
    }
    rec.permutation = std::move(perm);
  }
  rec.system_role_name = j.value("system_role", "system");

  for (const auto& rj : j.at("rounds")) {
    rec.rounds.push_back(round_from_json(rj));
  }
  const auto& messages = j.at("messages");
  if (!messages.empty()) {
    rec.system_text = messages[0].at("content").get<std::string>();
  }
  std::size_t mi = 1;
  for (auto& r : rec.rounds) {
    if (mi + 1 >= messages.size()) break;
    r.user_text = messages[mi].at("content").get<std::string>();
    r.response_text = messages[mi + 1].at("content").get<std::string>();
    mi += 2;
  }
  return rec;
}

SequenceRecord parse_transcript(const nlohmann::json& messages,
                                const QuestionItem& item,
                                const Evaluator& evaluator,
                                Protocol protocol) {
  if (!messages.is_array() || messages.empty()) {
    throw std::invalid_argument("transcript must be a non-empty array");
  }
  SequenceRecord rec;
  rec.question_id = item.id;
  rec.protocol = protocol;

  const auto& first = messages[0];
  auto first_role = first.at("role").get<std::string>();
  if (!role_from_name(first_role) ||
      *role_from_name(first_role) != Role::System) {
    throw std::invalid_argument("transcript must start with a system turn");
  }
  rec.system_role_name = first_role;
  rec.system_text = first.at("content").get<std::string>();

  int round = 0;
  for (std::size_t i = 1; i < messages.size(); i += 2) {
    auto user_role = messages[i].at("role").get<std::string>();
    if (user_role != "user") {
      throw std::invalid_argument("expected a user turn at message " +
                                  std::to_string(i));
    }
    if (i + 1 >= messages.size()) {
      throw std::invalid_argument("user turn without an assistant reply");
    }
    auto asst_role = messages[i + 1].at("role").get<std::string>();
    if (asst_role != "assistant") {
      throw std::invalid_argument("expected an assistant turn at message " +
                                  std::to_string(i + 1));
    }
    RoundRecord r;
    r.round = round++;
    r.user_text = messages[i].at("content").get<std::string>();
    r.response_text = messages[i + 1].at("content").get<std::string>();
    auto judgment = evaluator.judge(r.response_text, item);
    r.extracted_label = judgment.extracted_label;
    r.s = judgment.s;
    rec.rounds.push_back(std::move(r));
  }
  if (rec.rounds.empty()) {
    throw std::invalid_argument("transcript has no completed rounds");
  }
  if (rec.rounds.size() == 1 && rec.rounds[0].s == 0) {
    rec.status = SequenceStatus::InitialOnly;
  }
  return rec;
}

SequenceLog::SequenceLog(const std::filesystem::path& path)
    : out_(path, std::ios::app) {
  if (!out_.is_open()) {
    throw std::runtime_error("cannot open sequence log: " + path.string());
  }
}

void SequenceLog::append(const SequenceRecord& record) {
  auto line = sequence_to_json(record).dump();
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("sequence log write failure");
}

std::vector<SequenceRecord> load_sequences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open sequence log: " + path.string());
  }
  std::vector<SequenceRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(sequence_from_json(nlohmann::json::parse(line)));
  }
  return records;
}

std::vector<SummaryCell> summarize(std::span<const SequenceRecord> sequences,
                                   double gamma, int T,
                                   const std::string& run_name) {
  struct GroupKey {
    std::string protocol, persona;
    auto operator<=>(const GroupKey&) const = default;
  };
  struct CellKey {
    std::string protocol, persona, kind;
    auto operator<=>(const CellKey&) const = default;
  };

  // Round-0 correctness per question within each (protocol, persona) group.
  std::map<GroupKey, std::map<std::string, int>> initial;
  std::map<CellKey, std::vector<std::vector<int>>> cells;
  for (const auto& rec : sequences) {
    if (rec.rounds.empty()) continue;
    GroupKey gk{std::string(protocol_name(rec.protocol)),
                std::string(persona_kind_name(rec.persona))};
    initial[gk].emplace(rec.question_id, rec.rounds[0].s);

    if (rec.status != SequenceStatus::Complete) continue;
    if (rec.rounds.size() != static_cast<std::size_t>(T) + 1) continue;
    std::string kind =
        rec.followup_kind ? std::string(followup_kind_name(*rec.followup_kind))
                          : "-";
    cells[{gk.protocol, gk.persona, kind}].push_back(sequence_states(rec));
  }

  std::vector<SummaryCell> out;
  for (const auto& [key, bits] : cells) {
    if (bits.empty()) continue;
    SummaryCell cell;
    cell.run = run_name;
    cell.protocol = key.protocol;
    cell.persona = key.persona;
    cell.kind = key.kind;

    const auto& init_map = initial[{key.protocol, key.persona}];
    std::vector<int> init_bits;
    init_bits.reserve(init_map.size());
    for (const auto& [qid, s] : init_map) init_bits.push_back(s);
    cell.metrics.acc_init = acc_init(init_bits);
    cell.metrics.acc_avg = acc_avg(bits, T);
    cell.metrics.per_round_acc = per_round_accuracy(bits, T);
    double sway = 0.0, score = 0.0;
    for (const auto& s : bits) {
      sway += first_sway(s, T);
      score += pwc(s, gamma);
    }
    cell.metrics.r_sway_mean = sway / static_cast<double>(bits.size());
    cell.metrics.pwc_mean = score / static_cast<double>(bits.size());
    cell.metrics.sequence_count = static_cast<int>(bits.size());
    out.push_back(std::move(cell));
  }

  std::sort(out.begin(), out.end(), [](const SummaryCell& a,
                                       const SummaryCell& b) {
    return std::tuple(a.protocol, a.persona, kind_order_index(a.kind)) <
           std::tuple(b.protocol, b.persona, kind_order_index(b.kind));
  });
  return out;
}

std::string summary_csv(std::span<const SummaryCell> cells, int T) {
  std::string out = "run,protocol,persona,kind,acc_init,acc_avg,r_sway_mean,pwc_mean";
  for (int i = 1; i <= T; ++i) out += ",R" + std::to_string(i);
  out += "\n";
  for (const auto& c : cells) {
    out += c.run + "," + c.protocol + "," + c.persona + "," + c.kind + "," +
           fmt_double(c.metrics.acc_init) + "," +
           fmt_double(c.metrics.acc_avg) + "," +
           fmt_double(c.metrics.r_sway_mean) + "," +
           fmt_double(c.metrics.pwc_mean);
    for (double v : c.metrics.per_round_acc) out += "," + fmt_double(v);
    out += "\n";
  }
  return out;
}

nlohmann::json summary_json(std::span<const SummaryCell> cells, int T) {
  nlohmann::json j;
  j["T"] = T;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json row;
    row["run"] = c.run;
    row["protocol"] = c.protocol;
    row["persona"] = c.persona;
    row["kind"] = c.kind;
    row["acc_init"] = c.metrics.acc_init;
    row["acc_avg"] = c.metrics.acc_avg;
    row["r_sway_mean"] = c.metrics.r_sway_mean;
    row["pwc_mean"] = c.metrics.pwc_mean;
    row["per_round_acc"] = c.metrics.per_round_acc;
    row["sequence_count"] = c.metrics.sequence_count;
    rows.push_back(std::move(row));
  }
  j["cells"] = rows;
  return j;
}

std::string per_round_csv(std::span<const SummaryCell> cells) {
  std::string out = "run,protocol,persona,kind,round,accuracy\n";
  for (const auto& c : cells) {
    for (std::size_t i = 0; i < c.metrics.per_round_acc.size(); ++i) {
      out += c.run + "," + c.protocol + "," + c.persona + "," + c.kind + "," +
             std::to_string(i + 1) + "," +
             fmt_double(c.metrics.per_round_acc[i]) + "\n";
    }
  }
  return out;
}

std::vector<std::pair<std::string, double>> per_question_pwc(
    std::span<const SequenceRecord> sequences, double gamma) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& rec : sequences) {
    if (rec.status != SequenceStatus::Complete || rec.rounds.empty()) continue;
    auto& [sum, count] = acc[rec.question_id];
    sum += pwc(sequence_states(rec), gamma);
    ++count;
  }
  std::vector<std::pair<std::string, double>> out;
  out.reserve(acc.size());
  for (const auto& [qid, sc] : acc) {
    out.emplace_back(qid, sc.first / sc.second);
  }
  return out;  // std::map iteration is already id-sorted
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["gamma"] = config.gamma;
  j["T"] = config.T;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  j["persona"] = persona_kind_name(config.persona);
  j["carg_enabled"] = config.carg_enabled;
  j["parallelism"] = config.parallelism;
  j["temperature"] = config.temperature;
  j["max_tokens"] = config.max_tokens;
  j["run_name"] = config.run_name;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.gamma = j.value("gamma", c.gamma);
  c.T = j.value("T", c.T);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  if (j.contains("persona")) {
    auto p = persona_kind_from_name(j["persona"].get<std::string>());
    if (!p) throw std::invalid_argument("unknown persona in config");
    c.persona = *p;
  }
  c.carg_enabled = j.value("carg_enabled", c.carg_enabled);
  c.parallelism = j.value("parallelism", c.parallelism);
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.run_name = j.value("run_name", c.run_name);
  c.validate();
  return c;
}

void write_run_artifacts(const RunPaths& paths, Protocol protocol,
                         const RunConfig& config,
                         const std::string& provider_model,
                         const CampaignResult& result) {
  std::filesystem::create_directories(paths.dir);

  {
    SequenceLog log(paths.sequences());
    for (const auto& rec : result.sequences) log.append(rec);
  }

  nlohmann::json manifest;
  manifest["run_name"] = config.run_name;
  manifest["protocol"] = protocol_name(protocol);
  manifest["created_at"] = iso_timestamp_now();
  manifest["provider_model"] = provider_model;
  manifest["config"] = config_to_json(config);
  nlohmann::json seq_info = nlohmann::json::array();
  for (const auto& rec : result.sequences) {
    seq_info.push_back({{"question_id", rec.question_id},
                        {"seed", rec.seed},
                        {"status", sequence_status_name(rec.status)}});
  }
  manifest["sequences"] = seq_info;
  manifest["failures"] = result.failures;
  std::ofstream(paths.manifest()) << manifest.dump(2) << '\n';

  auto cells = summarize(result.sequences, config.gamma, config.T,
                         config.run_name);
  std::ofstream(paths.summary_csv_path()) << summary_csv(cells, config.T);
  std::ofstream(paths.summary_json_path())
      << summary_json(cells, config.T).dump(2) << '\n';
  std::ofstream(paths.per_round_csv_path()) << per_round_csv(cells);
}

}  // namespace mtc
