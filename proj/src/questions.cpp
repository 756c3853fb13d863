#include "mtc/questions.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mtc/rng.hpp"

namespace mtc {

namespace {

constexpr std::array<char, 4> kLabels = {'A', 'B', 'C', 'D'};

bool is_label(char c) { return c >= 'A' && c <= 'D'; }

// Minimal CSV field splitter with double-quote support.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<QuestionItem> parse_json_record(const nlohmann::json& j,
                                              std::string& error) {
  QuestionItem item;
  try {
    item.id = j.at("id").get<std::string>();
    item.text = j.at("question").get<std::string>();
    const auto& choices = j.at("choices");
    if (!choices.is_array() || choices.size() != 4) {
      error = "expected exactly 4 choices";
      return std::nullopt;
    }
    for (std::size_t i = 0; i < 4; ++i) {
      auto label = choices[i].at("label").get<std::string>();
      if (label.size() != 1) {
        error = "choice label must be a single character";
        return std::nullopt;
      }
      item.choices[i].label = label[0];
      item.choices[i].text = choices[i].at("text").get<std::string>();
    }
    auto answer = j.at("answer").get<std::string>();
    if (answer.size() != 1) {
      error = "answer must be a single label";
      return std::nullopt;
    }
    item.correct_label = answer[0];
    if (auto d = difficulty_from_name(j.value("difficulty", "college"))) {
      item.difficulty = *d;
    } else {
      error = "unknown difficulty";
      return std::nullopt;
    }
    item.topic = j.value("topic", "");
    if (auto s = source_from_name(j.value("source", "custom"))) {
      item.source = *s;
    } else {
      error = "unknown source";
      return std::nullopt;
    }
  } catch (const nlohmann::json::exception& e) {
    error = e.what();
    return std::nullopt;
  }
  return item;
}

// Columns: id,question,choiceA,choiceB,choiceC,choiceD,answer,difficulty,topic,source
std::optional<QuestionItem> parse_csv_record(const std::string& line,
                                             std::string& error) {
  auto fields = split_csv_line(line);
  if (fields.size() != 10) {
    error = "expected 10 columns, got " + std::to_string(fields.size());
    return std::nullopt;
  }
  QuestionItem item;
  item.id = fields[0];
  item.text = fields[1];
  for (std::size_t i = 0; i < 4; ++i) {
    item.choices[i].label = kLabels[i];
    item.choices[i].text = fields[2 + i];
  }
  if (fields[6].size() != 1) {
    error = "answer must be a single label";
    return std::nullopt;
  }
  item.correct_label = fields[6][0];
  if (auto d = difficulty_from_name(fields[7])) {
    item.difficulty = *d;
  } else {
    error = "unknown difficulty '" + fields[7] + "'";
    return std::nullopt;
  }
  item.topic = fields[8];
  if (auto s = source_from_name(fields[9])) {
    item.source = *s;
  } else {
    error = "unknown source '" + fields[9] + "'";
    return std::nullopt;
  }
  return item;
}

}  // namespace

std::vector<std::string> validate_item(const QuestionItem& item) {
  std::vector<std::string> issues;
  if (item.id.empty()) issues.push_back("id is empty");
  if (item.text.empty()) issues.push_back("question text is empty");

  std::array<int, 4> label_count = {0, 0, 0, 0};
  for (const auto& c : item.choices) {
    if (!is_label(c.label)) {
      issues.push_back(std::string("choice label '") + c.label +
                       "' is not in {A,B,C,D}");
      continue;
    }
    ++label_count[c.label - 'A'];
    if (c.text.empty()) {
      issues.push_back(std::string("choice ") + c.label + " text is empty");
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (label_count[i] > 1) {
      issues.push_back(std::string("duplicate choice label ") +
                       static_cast<char>('A' + i));
    }
  }
  bool correct_found = false;
  for (const auto& c : item.choices) {
    if (c.label == item.correct_label) correct_found = true;
  }
  if (!correct_found) {
    issues.push_back(std::string("correct_label '") + item.correct_label +
                     "' is not among the choice labels");
  }
  return issues;
}

std::string_view difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::Elementary: return "elementary";
    case Difficulty::HighSchool: return "high-school";
    case Difficulty::College: return "college";
    case Difficulty::Professional: return "professional";
  }
  return "college";
}

std::optional<Difficulty> difficulty_from_name(std::string_view s) {
  if (s == "elementary") return Difficulty::Elementary;
  if (s == "high-school") return Difficulty::HighSchool;
  if (s == "college") return Difficulty::College;
  if (s == "professional") return Difficulty::Professional;
  return std::nullopt;
}

std::string_view source_name(Source s) {
  switch (s) {
    case Source::Mmlu: return "mmlu";
    case Source::CommonsenseQa: return "commonsenseqa";
    case Source::TruthfulQa: return "truthfulqa";
    case Source::Custom: return "custom";
  }
  return "custom";
}

std::optional<Source> source_from_name(std::string_view s) {
  if (s == "mmlu") return Source::Mmlu;
  if (s == "commonsenseqa") return Source::CommonsenseQa;
  if (s == "truthfulqa") return Source::TruthfulQa;
  if (s == "custom") return Source::Custom;
  return std::nullopt;
}

IngestResult ingest_questions(const std::filesystem::path& path,
                              BankFormat format) {
  std::ifstream in(path);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open question file: " + path.string());
  }

  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (format == BankFormat::Csv && line_no == 1 &&
        line.rfind("id,", 0) == 0) {
      continue;  // header row
    }

    std::string error;
    std::optional<QuestionItem> item;
    if (format == BankFormat::JsonLines) {
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) {
        result.issues.push_back({line_no, "invalid JSON"});
        continue;
      }
      item = parse_json_record(j, error);
    } else {
      item = parse_csv_record(line, error);
    }
    if (!item) {
      result.issues.push_back({line_no, error});
      continue;
    }
    auto violations = validate_item(*item);
    if (!violations.empty()) {
      std::string msg;
      for (const auto& v : violations) {
        if (!msg.empty()) msg += "; ";
        msg += v;
      }
      result.issues.push_back({line_no, msg});
      continue;
    }
    result.items.push_back(std::move(*item));
  }
  return result;
}

QuestionItem shuffle_choices(const QuestionItem& item, std::uint64_t seed) {
  QuestionItem out = item;
  struct Entry {
    std::string text;
    bool correct;
  };
  std::vector<Entry> entries;
  entries.reserve(4);
  for (const auto& c : item.choices) {
    entries.push_back({c.text, c.label == item.correct_label});
  }
  std::mt19937_64 rng(mix_seed(seed, fnv1a(item.id)));
  seeded_shuffle(entries, rng);
  for (std::size_t i = 0; i < 4; ++i) {
    out.choices[i].label = kLabels[i];
    out.choices[i].text = entries[i].text;
    if (entries[i].correct) out.correct_label = kLabels[i];
  }
  return out;
}

std::string render_question_prompt(const QuestionItem& item) {
  std::string out = item.text;
  for (std::size_t i = 0; i < 4; ++i) {
    out += (i == 0) ? " " : ", ";
    out += item.choices[i].label;
    out += ". ";
    out += item.choices[i].text;
  }
  return out;
}

bool QuestionFilter::matches(const QuestionItem& item) const {
  if (difficulty && item.difficulty != *difficulty) return false;
  if (topic && item.topic != *topic) return false;
  if (source && item.source != *source) return false;
  return true;
}

std::vector<QuestionItem> filter_questions(std::span<const QuestionItem> items,
                                           const QuestionFilter& filter) {
  std::vector<QuestionItem> out;
  for (const auto& item : items) {
    if (filter.matches(item)) out.push_back(item);
  }
  return out;
}

}  // namespace mtc
