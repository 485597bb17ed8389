#include <algorithm>

#include "topkit/questgen.h"

namespace topkit {

namespace {

struct CategoryInfo {
  QuestionCategory category;
  const char* slug;
  const char* title;
  Level level;
};

constexpr std::array<CategoryInfo, kNumQuestionCategories> kCategoryInfo = {{
    {QuestionCategory::kNameLookup, "name_lookup", "Name Lookup", Level::kEasy},
    {QuestionCategory::kTravelTimeDriving, "travel_time_driving",
     "Travel Time (Driving)", Level::kEasy},
    {QuestionCategory::kTravelTimeWalking, "travel_time_walking",
     "Travel Time (Walking)", Level::kEasy},
    {QuestionCategory::kDistanceQuery, "distance_query", "Distance Query",
     Level::kEasy},
    {QuestionCategory::kDwellTimeLookup, "dwell_time_lookup",
     "Dwell Time Lookup", Level::kEasy},
    {QuestionCategory::kNearestNeighborSearch, "nearest_neighbor_search",
     "Nearest Neighbor Search", Level::kEasy},
    {QuestionCategory::kPlanEvaluation, "plan_evaluation", "Plan Evaluation",
     Level::kMedium},
    {QuestionCategory::kRouteComparison, "route_comparison",
     "Route Comparison", Level::kMedium},
    {QuestionCategory::kContextualRecommendation, "contextual_recommendation",
     "Contextual Recommendation", Level::kMedium},
    {QuestionCategory::kTemporalOptimization, "temporal_optimization",
     "Temporal Optimization", Level::kMedium},
    {QuestionCategory::kSingleFactorOptimization, "single_factor_optimization",
     "Single-Factor Optimization", Level::kMedium},
    {QuestionCategory::kFullItineraryConstruction,
     "full_itinerary_construction", "Full Itinerary Construction",
     Level::kHard},
    {QuestionCategory::kMultiConstraintPlanning, "multi_constraint_planning",
     "Multi-Constraint Planning", Level::kHard},
    {QuestionCategory::kPreferenceAwarePlanning, "preference_aware_planning",
     "Preference-Aware Planning", Level::kHard},
    {QuestionCategory::kCustomDwellTimePlanning, "custom_dwell_time_planning",
     "Custom Dwell-Time Planning", Level::kHard},
    {QuestionCategory::kAllIntentionPlanning, "all_intention_planning",
     "All-Intention Planning", Level::kHard},
}};

const CategoryInfo& Info(QuestionCategory c) {
  return kCategoryInfo[static_cast<std::size_t>(c)];
}

const std::vector<Category> kResidential = {Category::kApartment,
                                            Category::kCompany};
const std::vector<Category> kDwell(kDwellCategories.begin(),
                                  kDwellCategories.end());
const std::vector<Category> kErrands = {Category::kCafe, Category::kGym,
                                        Category::kMarket,
                                        Category::kRestaurant};
const std::vector<Category> kEverything(kAllCategories.begin(),
                                        kAllCategories.end());

SlotSpec PoiSlot(std::string name, std::vector<Category> pool) {
  return {std::move(name), SlotKind::kPoi, std::move(pool), ""};
}
SlotSpec Cat(std::string name, std::vector<Category> pool) {
  return {std::move(name), SlotKind::kCategory, std::move(pool), ""};
}
SlotSpec Of(std::string name, SlotKind kind, std::string depends_on = "") {
  return {std::move(name), kind, {}, std::move(depends_on)};
}

Template Make(QuestionCategory c, std::string pattern,
              std::vector<SlotSpec> slots, AnswerKind kind) {
  Template t;
  t.category = c;
  t.level = Info(c).level;
  t.template_id =
      std::string(LevelSlug(t.level)) + "." + Info(c).slug + ".v1";
  t.text_pattern = std::move(pattern);
  t.slots = std::move(slots);
  t.workflow_id = Info(c).slug;
  t.answer_kind = kind;
  return t;
}

}  // namespace

std::string_view LevelSlug(Level level) {
  switch (level) {
    case Level::kEasy: return "easy";
    case Level::kMedium: return "medium";
    case Level::kHard: return "hard";
  }
  return "unknown";
}

Level ParseLevel(std::string_view slug) {
  for (Level l : kAllLevels) {
    if (LevelSlug(l) == slug) return l;
  }
  throw ParseError("unknown level '" + std::string(slug) + "'");
}

int LevelNumber(Level level) { return static_cast<int>(level) + 1; }

const std::array<QuestionCategory, kNumQuestionCategories>&
AllQuestionCategories() {
  static const auto all = [] {
    std::array<QuestionCategory, kNumQuestionCategories> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = kCategoryInfo[i].category;
    return out;
  }();
  return all;
}

std::string_view QuestionCategorySlug(QuestionCategory c) {
  return Info(c).slug;
}
std::string_view QuestionCategoryTitle(QuestionCategory c) {
  return Info(c).title;
}
Level LevelOf(QuestionCategory c) { return Info(c).level; }

QuestionCategory ParseQuestionCategory(std::string_view slug) {
  for (const auto& info : kCategoryInfo) {
    if (info.slug == slug) return info.category;
  }
  throw ParseError("unknown question category '" + std::string(slug) + "'");
}

std::string_view AnswerKindSlug(AnswerKind k) {
  switch (k) {
    case AnswerKind::kNameList: return "name_list";
    case AnswerKind::kMinutes: return "minutes";
    case AnswerKind::kKilometers: return "kilometers";
    case AnswerKind::kPoi: return "poi";
    case AnswerKind::kClock: return "clock";
    case AnswerKind::kPlan: return "plan";
    case AnswerKind::kLabel: return "label";
    case AnswerKind::kInfeasible: return "infeasible";
  }
  return "unknown";
}

AnswerKind ParseAnswerKind(std::string_view slug) {
  for (AnswerKind k :
       {AnswerKind::kNameList, AnswerKind::kMinutes, AnswerKind::kKilometers,
        AnswerKind::kPoi, AnswerKind::kClock, AnswerKind::kPlan,
        AnswerKind::kLabel, AnswerKind::kInfeasible}) {
    if (AnswerKindSlug(k) == slug) return k;
  }
  throw ParseError("unknown answer kind '" + std::string(slug) + "'");
}

void GeneratorConfig::Validate() const {
  if (easy <= 0 || medium <= 0 || hard <= 0) {
    throw ConfigError("question counts per level must be positive");
  }
  if (all_intention_cap < 1 || all_intention_cap > kMaxRequiredCategories) {
    throw ConfigError("all-intention cap must be between 1 and " +
                      std::to_string(kMaxRequiredCategories));
  }
  if (lookup_times.empty() || departure_times.empty() ||
      candidate_times.empty() || dwell_override_minutes.empty()) {
    throw ConfigError("time and override pools must be nonempty");
  }
}

std::vector<Template> BuildTemplates(const GeneratorConfig& config) {
  config.Validate();
  using QC = QuestionCategory;
  using SK = SlotKind;
  std::vector<Template> out;

  out.push_back(Make(QC::kNameLookup,
                     "List the names of every {category_1} on the map.",
                     {Cat("category_1", kEverything)}, AnswerKind::kNameList));
  out.push_back(Make(
      QC::kTravelTimeDriving,
      "How many minutes does it take to drive from {poi_a} to {poi_b} when "
      "leaving at {time}?",
      {PoiSlot("poi_a", kEverything), PoiSlot("poi_b", kEverything),
       Of("time", SK::kLookupTime)},
      AnswerKind::kMinutes));
  out.push_back(Make(QC::kTravelTimeWalking,
                     "How many minutes does it take to walk from {poi_a} to "
                     "{poi_b}?",
                     {PoiSlot("poi_a", kEverything), PoiSlot("poi_b", kEverything)},
                     AnswerKind::kMinutes));
  out.push_back(Make(QC::kDistanceQuery,
                     "What is the distance in kilometers between {poi_a} and "
                     "{poi_b}?",
                     {PoiSlot("poi_a", kEverything), PoiSlot("poi_b", kEverything)},
                     AnswerKind::kKilometers));
  out.push_back(Make(QC::kDwellTimeLookup,
                     "How many minutes should I expect to spend at {poi_a} if "
                     "I arrive at {time}?",
                     {PoiSlot("poi_a", kDwell), Of("time", SK::kLookupTime)},
                     AnswerKind::kMinutes));
  out.push_back(Make(QC::kNearestNeighborSearch,
                     "Which {category_1} is closest to {origin}?",
                     {PoiSlot("origin", kResidential), Cat("category_1", kDwell)},
                     AnswerKind::kPoi));

  out.push_back(Make(
      QC::kPlanEvaluation,
      "I leave {origin} at {time}, stop at {poi_a} and then {poi_b}, and "
      "finish at {destination}. How many minutes does the whole trip take, "
      "including the time spent at each stop?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       PoiSlot("poi_a", kDwell), PoiSlot("poi_b", kDwell),
       Of("time", SK::kDepartureTime)},
      AnswerKind::kMinutes));
  out.push_back(Make(
      QC::kRouteComparison,
      "Leaving {origin} at {time} for {destination}, which route is shorter: "
      "A) stopping at {poi_a}, or B) stopping at {poi_b}?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       PoiSlot("poi_a", kDwell), PoiSlot("poi_b", kDwell),
       Of("time", SK::kDepartureTime)},
      AnswerKind::kLabel));
  out.push_back(Make(
      QC::kContextualRecommendation,
      "I am driving from {origin} to {destination} at {time} with a stop at "
      "{poi_a}. Which {category_1} should I add to keep the trip as short as "
      "possible?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       PoiSlot("poi_a", kDwell), Cat("category_1", kDwell),
       Of("time", SK::kDepartureTime)},
      AnswerKind::kPoi));
  out.push_back(Make(
      QC::kTemporalOptimization,
      "I need to get from {origin} to {destination} with a stop at a "
      "{category_1}. Which departure time among {candidates} gives the "
      "shortest trip?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kDwell), Of("candidates", SK::kCandidateTimes)},
      AnswerKind::kClock));
  out.push_back(Make(
      QC::kSingleFactorOptimization,
      "Plan a trip from {origin} to {destination} leaving at {time} that "
      "visits a {category_1} and a {category_2}, choosing the stops for "
      "{objective}.",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kDwell), Cat("category_2", kDwell),
       Of("objective", SK::kObjective), Of("time", SK::kDepartureTime)},
      AnswerKind::kPlan));

  out.push_back(Make(
      QC::kFullItineraryConstruction,
      "Build the fastest plan from {origin} to {destination}, leaving at "
      "{time}, that visits a {category_1}, a {category_2} and a "
      "{category_3}.",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kDwell), Cat("category_2", kDwell),
       Cat("category_3", kDwell), Of("time", SK::kDepartureTime)},
      AnswerKind::kPlan));
  Template multi = Make(
      QC::kMultiConstraintPlanning,
      "On the way from {origin} to {destination}, leaving at {time}, I must "
      "charge my car and also visit a {category_1} and a {category_2}. What "
      "is the fastest plan?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kErrands), Cat("category_2", kErrands),
       Of("time", SK::kDepartureTime)},
      AnswerKind::kPlan);
  multi.charge_required = true;
  out.push_back(std::move(multi));
  out.push_back(Make(
      QC::kPreferenceAwarePlanning,
      "Leaving {origin} at {time} for {destination}, I want to stop at a "
      "{category_1} of the {brand} brand and at a {category_2}. What is the "
      "fastest plan?",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kDwell), Of("brand", SK::kBrand, "category_1"),
       Cat("category_2", kDwell), Of("time", SK::kDepartureTime)},
      AnswerKind::kPlan));
  out.push_back(Make(
      QC::kCustomDwellTimePlanning,
      "Plan the fastest trip from {origin} to {destination} leaving at "
      "{time} with stops at a {category_1}, a {category_2} and a "
      "{category_3}. I will spend exactly {dwell_override} minutes at the "
      "{category_1}.",
      {PoiSlot("origin", kResidential), PoiSlot("destination", kResidential),
       Cat("category_1", kDwell), Cat("category_2", kDwell),
       Cat("category_3", kDwell), Of("dwell_override", SK::kDwellOverride),
       Of("time", SK::kDepartureTime)},
      AnswerKind::kPlan));

  std::vector<SlotSpec> all_slots = {PoiSlot("origin", kResidential),
                                     PoiSlot("destination", kResidential)};
  std::string list;
  for (int k = 1; k <= config.all_intention_cap; ++k) {
    const std::string name = "category_" + std::to_string(k);
    all_slots.push_back(Cat(name, kDwell));
    if (k > 1) list += k == config.all_intention_cap ? " and " : ", ";
    list += "a {" + name + "}";
  }
  all_slots.push_back(Of("time", SK::kDepartureTime));
  out.push_back(Make(QC::kAllIntentionPlanning,
                     "Starting at {origin} at {time} and ending at "
                     "{destination}, I want to get everything done in one "
                     "trip: " +
                         list + ". What is the fastest plan?",
                     std::move(all_slots), AnswerKind::kPlan));
  return out;
}

const Template& DefaultTemplate(QuestionCategory c) {
  static const std::vector<Template> templates = BuildTemplates();
  return templates[static_cast<std::size_t>(c)];
}

}  // namespace topkit
