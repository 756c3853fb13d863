// Command-line surface: validate question banks, run campaigns, recompute
// reports, and compare two runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "mtc/http_provider.hpp"
#include "mtc/orchestrator.hpp"
#include "mtc/reporting.hpp"
#include "mtc/scripted_provider.hpp"

namespace {

using namespace mtc;

BankFormat parse_format(const std::string& s) {
  if (s == "jsonl") return BankFormat::JsonLines;
  if (s == "csv") return BankFormat::Csv;
  throw std::invalid_argument("unknown bank format: " + s);
}

std::shared_ptr<ChatProvider> build_provider(const nlohmann::json& p) {
  auto type = p.at("type").get<std::string>();
  if (type == "scripted") {
    return ScriptedProvider::from_file(p.at("script").get<std::string>());
  }
  if (type == "openai") {
    HttpProviderConfig cfg;
    cfg.endpoint = p.at("endpoint").get<std::string>();
    cfg.model = p.at("model").get<std::string>();
    if (p.contains("api_key_env")) {
      const char* key = std::getenv(p["api_key_env"].get<std::string>().c_str());
      if (key) cfg.api_key = key;
    }
    cfg.wire_system_role = p.value("wire_system_role", cfg.wire_system_role);
    cfg.logprobs_supported = p.value("logprobs", true);
    cfg.rate_limit_rpm = p.value("rate_limit_rpm", cfg.rate_limit_rpm);
    cfg.max_retries = p.value("max_retries", cfg.max_retries);
    return std::make_shared<HttpProvider>(std::move(cfg));
  }
  throw std::invalid_argument("unknown provider type: " + type);
}

int cmd_validate(const std::string& bank_path, const std::string& format) {
  auto result = ingest_questions(bank_path, parse_format(format));
  for (const auto& issue : result.issues) {
    std::cerr << "error: record " << issue.record_index << ": "
              << issue.message << "\n";
  }
  std::cout << result.items.size() << " valid question(s), "
            << result.issues.size() << " rejected\n";
  return result.issues.empty() ? 0 : 1;
}

int cmd_run(const std::string& protocol_name_str, const std::string& bank_path,
            const std::string& bank_format, const std::string& config_path,
            const std::string& out_dir) {
  auto protocol = protocol_from_name(protocol_name_str);
  if (!protocol) {
    throw std::invalid_argument("unknown protocol: " + protocol_name_str);
  }

  std::ifstream cfg_in(config_path);
  if (!cfg_in.is_open()) {
    throw std::runtime_error("cannot open config: " + config_path);
  }
  nlohmann::json cfg_json;
  cfg_in >> cfg_json;

  RunConfig config = config_from_json(cfg_json);
  config.carg_enabled = *protocol == Protocol::Carg;
  auto provider = build_provider(cfg_json.at("provider"));

  Evaluator evaluator;
  if (cfg_json.contains("judge")) {
    auto judge_provider = build_provider(cfg_json["judge"].at("provider"));
    evaluator = Evaluator(
        judge_provider,
        cfg_json["judge"].value("template", Evaluator::default_judge_template()));
  }

  FollowUpCatalog catalog;
  if (cfg_json.contains("followup_templates")) {
    catalog = FollowUpCatalog::from_templates_file(
        cfg_json["followup_templates"].get<std::string>());
  }

  auto bank = ingest_questions(bank_path, parse_format(bank_format));
  for (const auto& issue : bank.issues) {
    std::cerr << "error: record " << issue.record_index << ": "
              << issue.message << "\n";
  }
  if (bank.items.empty()) {
    throw std::runtime_error("question bank has no valid items");
  }

  auto result = run_campaign(bank.items, *protocol, catalog, evaluator,
                             provider, config);
  RunPaths paths{out_dir};
  write_run_artifacts(paths, *protocol, config, provider->model_id(), result);

  auto usage = provider->total_usage();
  std::cout << result.sequences.size() << " sequence(s) written to "
            << out_dir << " (prompt tokens " << usage.prompt_tokens
            << ", completion tokens " << usage.completion_tokens << ")\n";
  for (const auto& f : result.failures) std::cerr << "error: " << f << "\n";
  return result.failures.empty() ? 0 : 1;
}

int cmd_report(const std::string& run_dir, double gamma_override,
               const std::string& format) {
  RunPaths paths{run_dir};
  std::ifstream manifest_in(paths.manifest());
  if (!manifest_in.is_open()) {
    throw std::runtime_error("cannot open manifest in " + run_dir);
  }
  nlohmann::json manifest;
  manifest_in >> manifest;
  RunConfig config = config_from_json(manifest.at("config"));
  double gamma = gamma_override > 0.0 ? gamma_override : config.gamma;

  auto sequences = load_sequences(paths.sequences());
  auto cells = summarize(sequences, gamma, config.T, config.run_name);
  if (format == "csv") {
    std::cout << summary_csv(cells, config.T);
  } else if (format == "json") {
    std::cout << summary_json(cells, config.T).dump(2) << "\n";
  } else {
    throw std::invalid_argument("unknown report format: " + format);
  }
  return 0;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b,
                double gamma, int iterations, std::uint64_t seed) {
  auto seq_a = load_sequences(RunPaths{dir_a}.sequences());
  auto seq_b = load_sequences(RunPaths{dir_b}.sequences());
  auto pwc_a = per_question_pwc(seq_a, gamma);
  auto pwc_b = per_question_pwc(seq_b, gamma);

  // Pair on the intersection of question ids (both lists are id-sorted).
  std::vector<double> a, b;
  std::size_t i = 0, j = 0;
  while (i < pwc_a.size() && j < pwc_b.size()) {
    if (pwc_a[i].first < pwc_b[j].first) {
      ++i;
    } else if (pwc_b[j].first < pwc_a[i].first) {
      ++j;
    } else {
      a.push_back(pwc_a[i++].second);
      b.push_back(pwc_b[j++].second);
    }
  }
  if (a.size() < 2) {
    throw std::runtime_error("fewer than 2 shared questions between runs");
  }
  double p = paired_permutation_test(a, b, iterations, seed);
  std::printf("n=%zu p_value=%.6g\n", a.size(), p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-turn consistency harness"};
  app.require_subcommand(1);

  std::string bank_path, bank_format = "jsonl", config_path, out_dir;
  std::string protocol, run_dir, dir_a, dir_b, report_format = "csv";
  double gamma = 0.0, compare_gamma = 0.45;
  int iterations = 10000;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Validate a question bank");
  validate->add_option("bank", bank_path)->required();
  validate->add_option("--format", bank_format, "jsonl or csv");

  auto* run = app.add_subcommand("run", "Run a campaign");
  run->add_option("protocol", protocol, "exp1|exp2|roleplay|carg")->required();
  run->add_option("--bank", bank_path)->required();
  run->add_option("--bank-format", bank_format, "jsonl or csv");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir)->required();

  auto* report = app.add_subcommand("report", "Recompute a run summary");
  report->add_option("run_dir", run_dir)->required();
  report->add_option("--gamma", gamma, "override the run's discount factor");
  report->add_option("--format", report_format, "csv or json");

  auto* compare = app.add_subcommand(
      "compare", "Paired permutation test on per-question consistency scores");
  compare->add_option("run_a", dir_a)->required();
  compare->add_option("run_b", dir_b)->required();
  compare->add_option("--gamma", compare_gamma);
  compare->add_option("--iterations", iterations);
  compare->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(bank_path, bank_format);
    if (run->parsed()) {
      return cmd_run(protocol, bank_path, bank_format, config_path, out_dir);
    }
    if (report->parsed()) return cmd_report(run_dir, gamma, report_format);
    if (compare->parsed()) {
      return cmd_compare(dir_a, dir_b, compare_gamma, iterations, seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
