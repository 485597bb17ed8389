#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topkit/codec.h"
#include "topkit/questgen.h"
#include "topkit/solver.h"
#include "topkit/worldmodel.h"

namespace topkit {

// A normalized answer. `value` shape by kind:
//   name_list  ["Name", ...]           minutes, kilometers  12.3
//   poi        {"id": 4, "name": ...}  clock                "09:00"
//   plan       {"stops": [names], "departure": "HH:MM"}
//   label      "A" | "B"               infeasible           "infeasible"
struct Answer {
  AnswerKind kind = AnswerKind::kMinutes;
  Json value;

  bool operator==(const Answer&) const = default;
};

Json AnswerToJson(const Answer& answer);
// Throws ParseError when the value does not have the shape of its kind.
Answer AnswerFromJson(const Json& j, std::string_view ctx);

struct Auxiliary {
  std::optional<Minutes> total_min;  // exact, unrounded
  std::optional<Json> leg_breakdown;
  std::optional<std::int64_t> considered_count;
  std::optional<std::string> infeasible_reason;
  // Workflow-specific extras (route totals, insertion position, ...).
  Json details = Json::object();

  bool operator==(const Auxiliary&) const = default;
};

struct GroundTruth {
  Answer primary;
  Auxiliary auxiliary;

  bool operator==(const GroundTruth&) const = default;
};

Json GroundTruthToJson(const GroundTruth& gt);
GroundTruth GroundTruthFromJson(const Json& j, std::string_view ctx);

// Runs the workflow bound to the instance's category. The text is never
// read. `engine` picks the exact search used by optimizing workflows.
GroundTruth Annotate(const WorldMap& map, const QuestionInstance& instance,
                     SearchEngine engine = SearchEngine::kBranchAndBound);

struct BenchmarkRecord {
  QuestionInstance question;
  GroundTruth ground_truth;

  bool operator==(const BenchmarkRecord&) const = default;
};

// Order-preserving; a failure names the question id.
std::vector<BenchmarkRecord> AnnotateAll(
    const WorldMap& map, const std::vector<QuestionInstance>& instances,
    SearchEngine engine = SearchEngine::kBranchAndBound);

std::string SerializeBenchmark(const WorldMap& map,
                               const std::vector<BenchmarkRecord>& records);
// Checks the map reference, unique ids, and that each primary kind is one
// the question's category can produce.
std::vector<BenchmarkRecord> ParseBenchmark(const WorldMap& map,
                                            std::string_view json_text);
void SaveBenchmark(const WorldMap& map,
                   const std::vector<BenchmarkRecord>& records,
                   const std::filesystem::path& path);
std::vector<BenchmarkRecord> LoadBenchmark(const WorldMap& map,
                                           const std::filesystem::path& path);

// Map-free view of a benchmark file, enough for scoring.
struct AnswerKeyEntry {
  std::string question_id;
  Level level = Level::kEasy;
  QuestionCategory category = QuestionCategory::kNameLookup;
  GroundTruth ground_truth;
};
struct AnswerKey {
  std::string map_hash;
  std::vector<AnswerKeyEntry> entries;
};
AnswerKey ParseAnswerKey(std::string_view json_text);
AnswerKey LoadAnswerKey(const std::filesystem::path& path);

struct VerifyMismatch {
  std::string question_id;
  std::string reason;
};
struct VerifyReport {
  int checked = 0;
  std::vector<VerifyMismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
};

// Re-derives every ground truth with the brute-force oracle and re-evaluates
// every plan answer against its recorded total.
VerifyReport VerifyBenchmark(const WorldMap& map,
                             const std::vector<BenchmarkRecord>& records);

}  // namespace topkit
