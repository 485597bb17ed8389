#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "topkit/codec.h"
#include "topkit/rng.h"
#include "topkit/solver.h"
#include "topkit/worldmodel.h"

namespace topkit {

enum class Level : std::uint8_t { kEasy, kMedium, kHard };
inline constexpr std::array<Level, 3> kAllLevels = {Level::kEasy, Level::kMedium,
                                                    Level::kHard};
std::string_view LevelSlug(Level level);
Level ParseLevel(std::string_view slug);
int LevelNumber(Level level);  // 1, 2, 3

// The question categories, grouped by level.
enum class QuestionCategory : std::uint8_t {
  kNameLookup,
  kTravelTimeDriving,
  kTravelTimeWalking,
  kDistanceQuery,
  kDwellTimeLookup,
  kNearestNeighborSearch,
  kPlanEvaluation,
  kRouteComparison,
  kContextualRecommendation,
  kTemporalOptimization,
  kSingleFactorOptimization,
  kFullItineraryConstruction,
  kMultiConstraintPlanning,
  kPreferenceAwarePlanning,
  kCustomDwellTimePlanning,
  kAllIntentionPlanning,
};
inline constexpr int kNumQuestionCategories = 16;
const std::array<QuestionCategory, kNumQuestionCategories>&
AllQuestionCategories();
std::string_view QuestionCategorySlug(QuestionCategory c);
std::string_view QuestionCategoryTitle(QuestionCategory c);
QuestionCategory ParseQuestionCategory(std::string_view slug);
Level LevelOf(QuestionCategory c);

enum class AnswerKind : std::uint8_t {
  kNameList,
  kMinutes,
  kKilometers,
  kPoi,
  kClock,
  kPlan,
  kLabel,
  kInfeasible,
};
std::string_view AnswerKindSlug(AnswerKind k);
AnswerKind ParseAnswerKind(std::string_view slug);

enum class SlotKind : std::uint8_t {
  kPoi,            // one POI from `categories`
  kCategory,       // one category from `categories`, distinct within a question
  kLookupTime,     // one of the four bucket anchors
  kDepartureTime,  // hourly departure within business hours
  kCandidateTimes, // fixed candidate set for departure optimization
  kDwellOverride,  // minutes from the override pool
  kBrand,          // brand of the category bound to `depends_on`
  kObjective,      // non-time single-factor objective
};

struct SlotSpec {
  std::string name;
  SlotKind kind = SlotKind::kPoi;
  std::vector<Category> categories;
  std::string depends_on;
};

struct Template {
  std::string template_id;
  Level level = Level::kEasy;
  QuestionCategory category = QuestionCategory::kNameLookup;
  std::string text_pattern;  // "{slot}" placeholders
  std::vector<SlotSpec> slots;
  std::string workflow_id;
  AnswerKind answer_kind = AnswerKind::kMinutes;
  // Hard templates that always include a charging stop.
  bool charge_required = false;
};

struct GeneratorConfig {
  int easy = 100;
  int medium = 200;
  int hard = 200;
  // Categories per all-intention question.
  int all_intention_cap = 4;
  std::vector<ClockTime> lookup_times = {
      ClockTime::At(0, 0), ClockTime::At(9, 0), ClockTime::At(12, 0),
      ClockTime::At(18, 0)};
  std::vector<ClockTime> departure_times = {
      ClockTime::At(10, 0), ClockTime::At(11, 0), ClockTime::At(12, 0),
      ClockTime::At(13, 0), ClockTime::At(14, 0), ClockTime::At(15, 0),
      ClockTime::At(16, 0)};
  std::vector<ClockTime> candidate_times = lookup_times;
  std::vector<int> dwell_override_minutes = {10, 15, 20, 30, 45};

  void Validate() const;  // throws ConfigError
};

// One template per question category, in category order.
std::vector<Template> BuildTemplates(const GeneratorConfig& config = {});
const Template& DefaultTemplate(QuestionCategory c);

using SlotValue = std::variant<PoiId, Category, ClockTime, Minutes, std::string,
                               Objective, std::vector<ClockTime>>;
using SlotBindings = std::vector<std::pair<std::string, SlotValue>>;

// The structured request a workflow answers. Only the fields its category
// needs are set.
struct QuestionQuery {
  std::optional<Category> category;
  std::optional<PoiId> poi_a;
  std::optional<PoiId> poi_b;
  std::optional<ClockTime> time;
  std::vector<Itinerary> routes;
  std::optional<QuerySpec> plan;
  std::vector<ClockTime> candidates;

  bool operator==(const QuestionQuery&) const = default;
};

struct QuestionInstance {
  std::string question_id;
  std::string template_id;
  Level level = Level::kEasy;
  QuestionCategory category = QuestionCategory::kNameLookup;
  SlotBindings slots;
  std::string text;
  QuestionQuery query;

  const SlotValue* Slot(std::string_view name) const;
  bool operator==(const QuestionInstance&) const = default;
};

// Draws every slot uniformly from its domain. POI slots are redrawn until
// their ids are distinct, category groups until they hold no excluded pair.
QuestionInstance InstantiateQuestion(const Template& tmpl, const WorldMap& map,
                                     Rng& rng,
                                     const GeneratorConfig& config = {});

// Per level, templates are cycled round-robin. Ids are
// "L<level number>-<category>-<ordinal>".
std::vector<QuestionInstance> GenerateDataset(
    const WorldMap& map, std::uint64_t seed,
    const GeneratorConfig& config = {});

using TextTransformer = std::function<std::string(std::string_view)>;

// Replaces the text only. An empty transformer result keeps the original.
QuestionInstance ParaphraseHook(const QuestionInstance& instance,
                                const TextTransformer& transformer);

// Rebuilds the structured request from slot bindings.
QuestionQuery BuildQuestionQuery(QuestionCategory category,
                                 const SlotBindings& slots,
                                 bool charge_required);

// Throws ValidationError when bindings, query or text break an invariant.
void ValidateInstance(const WorldMap& map, const QuestionInstance& instance);

Json SlotValueToJson(const WorldMap& map, const SlotValue& value);
Json InstanceToJson(const WorldMap& map, const QuestionInstance& instance);
QuestionInstance InstanceFromJson(const WorldMap& map, const Json& j,
                                  std::string_view ctx);
Json QuestionQueryToJson(QuestionCategory category, const QuestionQuery& q);

Json MapRefJson(const WorldMap& map);
std::string SerializeQuestions(const WorldMap& map,
                               const std::vector<QuestionInstance>& questions);
std::vector<QuestionInstance> ParseQuestions(const WorldMap& map,
                                             std::string_view json_text);
void SaveQuestions(const WorldMap& map,
                   const std::vector<QuestionInstance>& questions,
                   const std::filesystem::path& path);
std::vector<QuestionInstance> LoadQuestions(const WorldMap& map,
                                            const std::filesystem::path& path);

}  // namespace topkit
