#include <set>

#include "io_util.h"
#include "json_util.h"
#include "topkit/annotator.h"

namespace topkit {

using internal::ArrayOf;
using internal::As;
using internal::Field;
using internal::FieldAs;
using internal::OptionalField;

namespace {

constexpr std::size_t kAny = static_cast<std::size_t>(-1);

void CheckClock(const Json& j, const std::string& ctx) {
  try {
    ClockTime::Parse(As<std::string>(j, ctx));
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

bool KindFits(QuestionCategory c, AnswerKind kind) {
  if (kind == DefaultTemplate(c).answer_kind) return true;
  return kind == AnswerKind::kInfeasible &&
         (LevelOf(c) == Level::kHard ||
          c == QuestionCategory::kContextualRecommendation ||
          c == QuestionCategory::kTemporalOptimization ||
          c == QuestionCategory::kSingleFactorOptimization);
}

const Json& QuestionsArray(const Json& j) {
  return ArrayOf(Field(j, "questions", "benchmark"), kAny,
                 "benchmark.questions");
}

}  // namespace

Json AnswerToJson(const Answer& answer) {
  Json j;
  j["kind"] = AnswerKindSlug(answer.kind);
  j["value"] = answer.value;
  return j;
}

Answer AnswerFromJson(const Json& j, std::string_view ctx_in) {
  const std::string ctx(ctx_in);
  Answer a;
  try {
    a.kind = ParseAnswerKind(FieldAs<std::string>(j, "kind", ctx));
  } catch (const ParseError& e) {
    throw ParseError(ctx + ".kind: " + e.what());
  }
  const std::string vctx = ctx + ".value";
  a.value = Field(j, "value", ctx);
  const Json& v = a.value;
  switch (a.kind) {
    case AnswerKind::kNameList:
      ArrayOf(v, kAny, vctx);
      for (std::size_t i = 0; i < v.size(); ++i) {
        As<std::string>(v[i], vctx + "[" + std::to_string(i) + "]");
      }
      break;
    case AnswerKind::kMinutes:
    case AnswerKind::kKilometers:
      if (!v.is_number()) throw ParseError(vctx + ": expected a number");
      break;
    case AnswerKind::kPoi:
      if (v.is_object()) {
        FieldAs<std::string>(v, "name", vctx);
        if (const Json* id = OptionalField(v, "id")) {
          As<std::int32_t>(*id, vctx + ".id");
        }
      } else if (!v.is_string()) {
        throw ParseError(vctx + ": expected a POI name or {id, name}");
      }
      break;
    case AnswerKind::kClock:
      CheckClock(v, vctx);
      break;
    case AnswerKind::kPlan: {
      const Json& stops = ArrayOf(Field(v, "stops", vctx), kAny, vctx + ".stops");
      for (std::size_t i = 0; i < stops.size(); ++i) {
        As<std::string>(stops[i], vctx + ".stops[" + std::to_string(i) + "]");
      }
      CheckClock(Field(v, "departure", vctx), vctx + ".departure");
      break;
    }
    case AnswerKind::kLabel: {
      const auto label = As<std::string>(v, vctx);
      if (label != "A" && label != "B") {
        throw ParseError(vctx + ": label must be \"A\" or \"B\"");
      }
      break;
    }
    case AnswerKind::kInfeasible:
      break;
  }
  return a;
}

Json GroundTruthToJson(const GroundTruth& gt) {
  Json aux;
  const Auxiliary& a = gt.auxiliary;
  if (a.total_min) aux["total_min"] = MinutesToJson(*a.total_min);
  if (a.leg_breakdown) aux["leg_breakdown"] = *a.leg_breakdown;
  if (a.considered_count) aux["considered_count"] = *a.considered_count;
  if (a.infeasible_reason) aux["infeasible_reason"] = *a.infeasible_reason;
  aux["details"] = a.details;
  Json j;
  j["primary"] = AnswerToJson(gt.primary);
  j["auxiliary"] = std::move(aux);
  return j;
}

GroundTruth GroundTruthFromJson(const Json& j, std::string_view ctx_in) {
  const std::string ctx(ctx_in);
  GroundTruth gt;
  gt.primary = AnswerFromJson(Field(j, "primary", ctx), ctx + ".primary");
  const std::string actx = ctx + ".auxiliary";
  const Json& aux = Field(j, "auxiliary", ctx);
  if (!aux.is_object()) throw ParseError(actx + ": expected an object");
  Auxiliary& a = gt.auxiliary;
  if (const Json* t = OptionalField(aux, "total_min")) {
    a.total_min = MinutesFromJson(*t, actx + ".total_min");
  }
  if (const Json* legs = OptionalField(aux, "leg_breakdown")) {
    a.leg_breakdown = ArrayOf(*legs, kAny, actx + ".leg_breakdown");
  }
  if (const Json* n = OptionalField(aux, "considered_count")) {
    a.considered_count = As<std::int64_t>(*n, actx + ".considered_count");
  }
  if (const Json* r = OptionalField(aux, "infeasible_reason")) {
    const auto tag = As<std::string>(*r, actx + ".infeasible_reason");
    try {
      Violation::Parse(tag);
    } catch (const ParseError& e) {
      throw ParseError(actx + ".infeasible_reason: " + e.what());
    }
    a.infeasible_reason = tag;
  }
  if (const Json* d = OptionalField(aux, "details")) {
    if (!d->is_object()) throw ParseError(actx + ".details: expected an object");
    a.details = *d;
  }
  return gt;
}

std::string SerializeBenchmark(const WorldMap& map,
                               const std::vector<BenchmarkRecord>& records) {
  Json j;
  j["map_ref"] = MapRefJson(map);
  Json arr = Json::array();
  for (const BenchmarkRecord& rec : records) {
    Json q = InstanceToJson(map, rec.question);
    q["ground_truth"] = GroundTruthToJson(rec.ground_truth);
    arr.push_back(std::move(q));
  }
  j["questions"] = std::move(arr);
  return j.dump() + "\n";
}

std::vector<BenchmarkRecord> ParseBenchmark(const WorldMap& map,
                                            std::string_view json_text) {
  const Json j = internal::ParseJsonText(json_text, "benchmark");
  const auto hash = FieldAs<std::string>(Field(j, "map_ref", "benchmark"),
                                         "hash", "benchmark.map_ref");
  if (hash != MapHash(map)) {
    throw ValidationError("benchmark.map_ref.hash: " + hash +
                          " does not match the map (" + MapHash(map) + ")");
  }
  const Json& arr = QuestionsArray(j);
  std::vector<BenchmarkRecord> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    BenchmarkRecord rec;
    rec.question =
        InstanceFromJson(map, arr[i], "questions[" + std::to_string(i) + "]");
    const std::string ctx = "question " + rec.question.question_id;
    if (!ids.insert(rec.question.question_id).second) {
      throw ValidationError("duplicate question id " + rec.question.question_id);
    }
    rec.ground_truth = GroundTruthFromJson(Field(arr[i], "ground_truth", ctx),
                                           ctx + ".ground_truth");
    if (!KindFits(rec.question.category, rec.ground_truth.primary.kind)) {
      throw ValidationError(
          ctx + ".ground_truth.primary.kind: '" +
          std::string(AnswerKindSlug(rec.ground_truth.primary.kind)) +
          "' does not fit category " +
          std::string(QuestionCategorySlug(rec.question.category)));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void SaveBenchmark(const WorldMap& map,
                   const std::vector<BenchmarkRecord>& records,
                   const std::filesystem::path& path) {
  internal::WriteFile(path, SerializeBenchmark(map, records));
}

std::vector<BenchmarkRecord> LoadBenchmark(const WorldMap& map,
                                           const std::filesystem::path& path) {
  return ParseBenchmark(map, internal::ReadFile(path));
}

AnswerKey ParseAnswerKey(std::string_view json_text) {
  const Json j = internal::ParseJsonText(json_text, "benchmark");
  AnswerKey key;
  key.map_hash = FieldAs<std::string>(Field(j, "map_ref", "benchmark"), "hash",
                                      "benchmark.map_ref");
  const Json& arr = QuestionsArray(j);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ictx = "questions[" + std::to_string(i) + "]";
    AnswerKeyEntry e;
    e.question_id = FieldAs<std::string>(arr[i], "id", ictx);
    const std::string ctx = "question " + e.question_id;
    try {
      e.level = ParseLevel(FieldAs<std::string>(arr[i], "level", ctx));
      e.category =
          ParseQuestionCategory(FieldAs<std::string>(arr[i], "category", ctx));
    } catch (const ParseError& err) {
      throw ParseError(ctx + ": " + err.what());
    }
    if (e.level != LevelOf(e.category)) {
      throw ValidationError(ctx + ": level does not match category");
    }
    if (!ids.insert(e.question_id).second) {
      throw ValidationError("duplicate question id " + e.question_id);
    }
    e.ground_truth = GroundTruthFromJson(Field(arr[i], "ground_truth", ctx),
                                         ctx + ".ground_truth");
    if (!KindFits(e.category, e.ground_truth.primary.kind)) {
      throw ValidationError(ctx + ".ground_truth.primary.kind: does not fit "
                                  "the category");
    }
    key.entries.push_back(std::move(e));
  }
  return key;
}

AnswerKey LoadAnswerKey(const std::filesystem::path& path) {
  return ParseAnswerKey(internal::ReadFile(path));
}

}  // namespace topkit
