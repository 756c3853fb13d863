#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtc {

enum class Difficulty { Elementary, HighSchool, College, Professional };
enum class Source { Mmlu, CommonsenseQa, TruthfulQa, Custom };

struct Choice {
  char label = 'A';  // one of A/B/C/D
  std::string text;
};

// One multiple-choice question: prose, four labeled choices, gold label.
struct QuestionItem {
  std::string id;
  std::string text;
  std::array<Choice, 4> choices;
  char correct_label = 'A';
  Difficulty difficulty = Difficulty::College;
  std::string topic;
  Source source = Source::Custom;
};

// Empty vector means the item is well-formed.
std::vector<std::string> validate_item(const QuestionItem& item);

std::string_view difficulty_name(Difficulty d);
std::optional<Difficulty> difficulty_from_name(std::string_view s);
std::string_view source_name(Source s);
std::optional<Source> source_from_name(std::string_view s);

enum class BankFormat { JsonLines, Csv };

struct IngestIssue {
  std::size_t record_index = 0;  // 1-based line number
  std::string message;
};

struct IngestResult {
  std::vector<QuestionItem> items;
  std::vector<IngestIssue> issues;
};

// Reads a question file. Records that fail validation are reported in
// `issues` with their line number and the violated rule; valid records are
// still returned. Throws std::runtime_error if the file cannot be opened.
IngestResult ingest_questions(const std::filesystem::path& path,
                              BankFormat format);

// Permutes the choice texts across the fixed A..D label slots; the gold
// label follows the text it was attached to. Deterministic per (item, seed).
QuestionItem shuffle_choices(const QuestionItem& item, std::uint64_t seed);

// "<question> A. <t>, B. <t>, C. <t>, D. <t>"
std::string render_question_prompt(const QuestionItem& item);

struct QuestionFilter {
  std::optional<Difficulty> difficulty;
  std::optional<std::string> topic;
  std::optional<Source> source;

  bool matches(const QuestionItem& item) const;
};

std::vector<QuestionItem> filter_questions(std::span<const QuestionItem> items,
                                           const QuestionFilter& filter);

}  // namespace mtc
