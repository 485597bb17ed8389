#include "topkit/evaluator.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "io_util.h"
#include "json_util.h"

namespace topkit {

using internal::Field;
using internal::FieldAs;

namespace {

std::optional<std::string> NameOf(const Json& v) {
  if (v.is_string()) return NormalizeName(v.get<std::string>());
  if (v.is_object()) {
    auto it = v.find("name");
    if (it != v.end() && it->is_string()) {
      return NormalizeName(it->get<std::string>());
    }
  }
  return std::nullopt;
}

std::optional<ClockTime> ClockOf(const Json& v) {
  if (!v.is_string()) return std::nullopt;
  try {
    return ClockTime::Parse(NormalizeName(v.get<std::string>()));
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::optional<std::vector<std::string>> NamesOf(const Json& v) {
  if (!v.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const Json& e : v) {
    if (!e.is_string()) return std::nullopt;
    out.push_back(NormalizeName(e.get<std::string>()));
  }
  return out;
}

constexpr MatchResult kMatch{true, MatchReason::kMatch};
MatchResult Miss(MatchReason r) { return {false, r}; }

}  // namespace

std::string_view MatchReasonSlug(MatchReason r) {
  switch (r) {
    case MatchReason::kMatch: return "match";
    case MatchReason::kMissing: return "missing";
    case MatchReason::kKindMismatch: return "kind_mismatch";
    case MatchReason::kValueMismatch: return "value_mismatch";
    case MatchReason::kSequenceMismatch: return "sequence_mismatch";
    case MatchReason::kDepartureMismatch: return "departure_mismatch";
    case MatchReason::kOutOfTolerance: return "out_of_tolerance";
  }
  return "unknown";
}

std::string NormalizeName(std::string_view name) {
  const auto ws = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!name.empty() && ws(name.front())) name.remove_prefix(1);
  while (!name.empty() && ws(name.back())) name.remove_suffix(1);
  std::string out(name);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

MatchResult CompareAnswer(const Answer& truth, const Answer& answer) {
  if (truth.kind != answer.kind) return Miss(MatchReason::kKindMismatch);
  const Json& t = truth.value;
  const Json& a = answer.value;
  switch (truth.kind) {
    case AnswerKind::kNameList: {
      auto tn = NamesOf(t);
      auto an = NamesOf(a);
      if (!tn || !an) return Miss(MatchReason::kValueMismatch);
      std::set<std::string> ts(tn->begin(), tn->end());
      std::set<std::string> as(an->begin(), an->end());
      return ts == as ? kMatch : Miss(MatchReason::kValueMismatch);
    }
    case AnswerKind::kMinutes:
    case AnswerKind::kKilometers: {
      if (!t.is_number() || !a.is_number()) {
        return Miss(MatchReason::kValueMismatch);
      }
      const double diff = std::fabs(t.get<double>() - a.get<double>());
      return diff <= kNumericTolerance + 1e-9
                 ? kMatch
                 : Miss(MatchReason::kOutOfTolerance);
    }
    case AnswerKind::kPoi:
    case AnswerKind::kLabel: {
      auto tn = NameOf(t);
      auto an = NameOf(a);
      return tn && an && *tn == *an ? kMatch : Miss(MatchReason::kValueMismatch);
    }
    case AnswerKind::kClock: {
      auto tc = ClockOf(t);
      auto ac = ClockOf(a);
      return tc && ac && *tc == *ac ? kMatch : Miss(MatchReason::kValueMismatch);
    }
    case AnswerKind::kPlan: {
      if (!t.is_object() || !a.is_object()) {
        return Miss(MatchReason::kValueMismatch);
      }
      auto ts = NamesOf(t.value("stops", Json()));
      auto as = NamesOf(a.value("stops", Json()));
      if (!ts || !as) return Miss(MatchReason::kValueMismatch);
      if (*ts != *as) return Miss(MatchReason::kSequenceMismatch);
      auto td = ClockOf(t.value("departure", Json()));
      auto ad = ClockOf(a.value("departure", Json()));
      if (!td || !ad || *td != *ad) return Miss(MatchReason::kDepartureMismatch);
      return kMatch;
    }
    case AnswerKind::kInfeasible:
      return kMatch;
  }
  return Miss(MatchReason::kValueMismatch);
}

EvaluationReport EvaluateRun(const AnswerKey& key,
                             const std::vector<AnswerRecord>& answers) {
  EvaluationReport report;
  report.map_hash = key.map_hash;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < key.entries.size(); ++i) {
    index.emplace(key.entries[i].question_id, i);
  }
  std::vector<const Answer*> chosen(key.entries.size(), nullptr);
  for (const AnswerRecord& rec : answers) {
    auto it = index.find(rec.question_id);
    if (it == index.end()) {
      ++report.orphan_answers;
      continue;
    }
    if (chosen[it->second]) ++report.duplicate_answers;
    chosen[it->second] = &rec.answer;
  }
  for (std::size_t i = 0; i < key.entries.size(); ++i) {
    const AnswerKeyEntry& e = key.entries[i];
    const MatchResult r = chosen[i]
                              ? CompareAnswer(e.ground_truth.primary, *chosen[i])
                              : Miss(MatchReason::kMissing);
    report.per_question.push_back({e.question_id, r});
    for (Accuracy* acc : {&report.per_level[e.level],
                          &report.per_category[e.category], &report.overall}) {
      ++acc->total;
      if (r.correct) ++acc->correct;
    }
  }
  return report;
}

Json ReportToJson(const EvaluationReport& report) {
  auto acc = [](const Accuracy& a) {
    Json j;
    j["correct"] = a.correct;
    j["total"] = a.total;
    j["accuracy"] = a.fraction();
    return j;
  };
  Json j;
  j["tool_version"] = TOPKIT_VERSION;
  j["map_hash"] = report.map_hash;
  j["overall"] = acc(report.overall);
  Json levels = Json::object();
  for (const auto& [level, a] : report.per_level) {
    levels[std::string(LevelSlug(level))] = acc(a);
  }
  j["per_level"] = std::move(levels);
  Json cats = Json::object();
  for (const auto& [c, a] : report.per_category) {
    cats[std::string(QuestionCategorySlug(c))] = acc(a);
  }
  j["per_category"] = std::move(cats);
  j["warnings"] = {{"duplicate_answers", report.duplicate_answers},
                   {"orphan_answers", report.orphan_answers}};
  Json per = Json::object();
  for (const QuestionScore& s : report.per_question) {
    per[s.question_id] = {{"correct", s.result.correct},
                          {"reason", MatchReasonSlug(s.result.reason)}};
  }
  j["per_question"] = std::move(per);
  return j;
}

std::vector<AnswerRecord> ParseAnswers(std::string_view json_text) {
  const Json j = internal::ParseJsonText(json_text, "answers");
  const Json& arr = internal::ArrayOf(Field(j, "answers", "answers"),
                                      static_cast<std::size_t>(-1),
                                      "answers.answers");
  std::vector<AnswerRecord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string ctx = "answers[" + std::to_string(i) + "]";
    AnswerRecord rec;
    rec.question_id = FieldAs<std::string>(arr[i], "question_id", ctx);
    const Json& ans = Field(arr[i], "answer", ctx);
    try {
      rec.answer.kind =
          ParseAnswerKind(FieldAs<std::string>(ans, "kind", ctx + ".answer"));
    } catch (const ParseError& e) {
      throw ParseError(ctx + ".answer.kind: " + e.what());
    }
    rec.answer.value = Field(ans, "value", ctx + ".answer");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnswerRecord> LoadAnswers(const std::filesystem::path& path) {
  return ParseAnswers(internal::ReadFile(path));
}

std::string SerializeAnswers(const std::vector<AnswerRecord>& answers) {
  Json arr = Json::array();
  for (const AnswerRecord& rec : answers) {
    Json r;
    r["question_id"] = rec.question_id;
    r["answer"] = AnswerToJson(rec.answer);
    arr.push_back(std::move(r));
  }
  Json j;
  j["answers"] = std::move(arr);
  return j.dump() + "\n";
}

std::vector<AnswerRecord> ProjectAnswers(const AnswerKey& key) {
  std::vector<AnswerRecord> out;
  for (const AnswerKeyEntry& e : key.entries) {
    out.push_back({e.question_id, e.ground_truth.primary});
  }
  return out;
}

}  // namespace topkit
