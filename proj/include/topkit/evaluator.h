#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "topkit/annotator.h"

namespace topkit {

struct AnswerRecord {
  std::string question_id;
  Answer answer;
};

enum class MatchReason : std::uint8_t {
  kMatch,
  kMissing,
  kKindMismatch,
  kValueMismatch,
  kSequenceMismatch,
  kDepartureMismatch,
  kOutOfTolerance,
};
std::string_view MatchReasonSlug(MatchReason r);

struct MatchResult {
  bool correct = false;
  MatchReason reason = MatchReason::kMissing;
};

// Absolute tolerance for minute and kilometer answers.
inline constexpr double kNumericTolerance = 0.05;

// Trims ASCII whitespace and lowercases ASCII letters.
std::string NormalizeName(std::string_view name);

// Total: malformed answer values are scored as mismatches, never thrown.
MatchResult CompareAnswer(const Answer& truth, const Answer& answer);

struct Accuracy {
  int correct = 0;
  int total = 0;

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
};

struct QuestionScore {
  std::string question_id;
  MatchResult result;
};

struct EvaluationReport {
  std::string map_hash;
  std::vector<QuestionScore> per_question;  // benchmark order
  std::map<Level, Accuracy> per_level;
  std::map<QuestionCategory, Accuracy> per_category;
  Accuracy overall;
  int duplicate_answers = 0;
  int orphan_answers = 0;
};

// One trial per question. A repeated id keeps its last answer and counts a
// duplicate; ids outside the benchmark are tallied as orphans. Denominators
// are always the benchmark size.
EvaluationReport EvaluateRun(const AnswerKey& key,
                             const std::vector<AnswerRecord>& answers);

Json ReportToJson(const EvaluationReport& report);

// Only structure is checked here; value shapes are judged when scoring.
std::vector<AnswerRecord> ParseAnswers(std::string_view json_text);
std::vector<AnswerRecord> LoadAnswers(const std::filesystem::path& path);
std::string SerializeAnswers(const std::vector<AnswerRecord>& answers);

// The ground-truth primaries as an answer list.
std::vector<AnswerRecord> ProjectAnswers(const AnswerKey& key);

}  // namespace topkit
