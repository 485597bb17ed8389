#include <gtest/gtest.h>

#include <cctype>
#include <map>
#include <regex>
#include <set>

#include "json.hpp"
#include "test_support.h"
#include "topkit/questgen.h"

namespace topkit {
namespace {

const WorldMap& DefaultMap() {
  static const WorldMap map = GenerateMap(7);
  return map;
}

const std::vector<QuestionInstance>& DefaultDataset() {
  static const auto questions = GenerateDataset(DefaultMap(), 7);
  return questions;
}

std::set<std::string> PatternSlots(const std::string& pattern) {
  std::set<std::string> out;
  const std::regex slot(R"(\{([a-z_0-9]+)\})");
  for (auto it = std::sregex_iterator(pattern.begin(), pattern.end(), slot);
       it != std::sregex_iterator(); ++it) {
    out.insert((*it)[1]);
  }
  return out;
}

TEST(TemplateTest, SixteenTemplatesInThreeLevels) {
  const auto templates = BuildTemplates();
  ASSERT_EQ(templates.size(), 16u);
  std::map<Level, int> per_level;
  std::set<std::string> ids;
  std::set<std::string> workflows;
  for (const Template& t : templates) {
    ++per_level[t.level];
    EXPECT_EQ(t.level, LevelOf(t.category));
    EXPECT_TRUE(ids.insert(t.template_id).second);
    EXPECT_TRUE(workflows.insert(t.workflow_id).second);
  }
  EXPECT_EQ(per_level[Level::kEasy], 6);
  EXPECT_EQ(per_level[Level::kMedium], 5);
  EXPECT_EQ(per_level[Level::kHard], 5);
}

TEST(TemplateTest, EveryPatternSlotHasADomain) {
  for (const Template& t : BuildTemplates()) {
    std::set<std::string> declared;
    for (const SlotSpec& s : t.slots) declared.insert(s.name);
    EXPECT_EQ(PatternSlots(t.text_pattern), declared) << t.template_id;
  }
}

TEST(TemplateTest, CategorySlugsRoundTrip) {
  for (QuestionCategory c : AllQuestionCategories()) {
    EXPECT_EQ(ParseQuestionCategory(QuestionCategorySlug(c)), c);
    EXPECT_FALSE(QuestionCategoryTitle(c).empty());
  }
  EXPECT_THROW(ParseQuestionCategory("trivia"), ParseError);
  EXPECT_EQ(LevelNumber(Level::kHard), 3);
}

TEST(TemplateTest, AllIntentionCapIsConfigurable) {
  GeneratorConfig config;
  config.all_intention_cap = 3;
  const auto t = BuildTemplates(config)[15];
  ASSERT_EQ(t.category, QuestionCategory::kAllIntentionPlanning);
  EXPECT_EQ(PatternSlots(t.text_pattern).count("category_3"), 1u);
  EXPECT_EQ(PatternSlots(t.text_pattern).count("category_4"), 0u);
  config.all_intention_cap = 5;
  EXPECT_THROW(BuildTemplates(config), ConfigError);
}

TEST(GenerateDatasetTest, DefaultShape) {
  const auto& qs = DefaultDataset();
  ASSERT_EQ(qs.size(), 500u);
  std::map<Level, int> per_level;
  std::map<QuestionCategory, int> per_category;
  for (const auto& q : qs) {
    ++per_level[q.level];
    ++per_category[q.category];
  }
  EXPECT_EQ(per_level[Level::kEasy], 100);
  EXPECT_EQ(per_level[Level::kMedium], 200);
  EXPECT_EQ(per_level[Level::kHard], 200);
  EXPECT_EQ(per_category.size(), 16u);
  for (const auto& [c, n] : per_category) {
    if (LevelOf(c) == Level::kEasy) {
      EXPECT_TRUE(n == 16 || n == 17) << QuestionCategorySlug(c) << " " << n;
    } else {
      EXPECT_EQ(n, 40) << QuestionCategorySlug(c);
    }
  }
}

TEST(GenerateDatasetTest, IdsFollowFormat) {
  const std::regex id(R"(L[123]-[a-z_]+-\d{3})");
  std::set<std::string> seen;
  for (const auto& q : DefaultDataset()) {
    EXPECT_TRUE(std::regex_match(q.question_id, id)) << q.question_id;
    EXPECT_TRUE(seen.insert(q.question_id).second);
    EXPECT_EQ(q.question_id.substr(0, 3),
              "L" + std::to_string(LevelNumber(q.level)) + "-");
    EXPECT_NE(q.question_id.find(QuestionCategorySlug(q.category)),
              std::string::npos);
  }
  EXPECT_EQ(DefaultDataset().front().question_id, "L1-name_lookup-001");
}

TEST(GenerateDatasetTest, InstancesAreValid) {
  for (const auto& q : DefaultDataset()) {
    EXPECT_NO_THROW(ValidateInstance(DefaultMap(), q)) << q.question_id;
    std::set<PoiId> pois;
    for (const auto& [name, v] : q.slots) {
      if (const auto* id = std::get_if<PoiId>(&v)) {
        EXPECT_TRUE(pois.insert(*id).second) << q.question_id;
        EXPECT_NE(q.text.find(DefaultMap().poi(*id).name), std::string::npos);
      }
    }
    if (q.query.plan) EXPECT_NO_THROW(ValidateQuery(DefaultMap(), *q.query.plan));
  }
}

TEST(GenerateDatasetTest, DrivingQuestionNamesTwoPoisAndATime) {
  for (const auto& q : DefaultDataset()) {
    if (q.category != QuestionCategory::kTravelTimeDriving) continue;
    ASSERT_NE(*q.query.poi_a, *q.query.poi_b);
    const std::regex time(R"(\b\d{2}:\d{2}\b)");
    EXPECT_TRUE(std::regex_search(q.text, time)) << q.text;
    EXPECT_TRUE(q.query.time.has_value());
  }
}

TEST(GenerateDatasetTest, MultiConstraintChargesWithoutDuplicates) {
  for (const auto& q : DefaultDataset()) {
    if (q.category != QuestionCategory::kMultiConstraintPlanning) continue;
    ASSERT_TRUE(q.query.plan->charge_required);
    for (Category c : q.query.plan->required_categories) {
      EXPECT_NE(c, Category::kCharging);
    }
  }
}

TEST(GenerateDatasetTest, ExcludedPairsNeverBound) {
  GenerationConfig gen;
  gen.exclusions = {{"gas", "charging"}, {"cafe", "gym"}};
  const WorldMap map = GenerateMap(21, gen);
  const auto qs = GenerateDataset(map, 21);
  int planning = 0;
  for (const auto& q : qs) {
    if (!q.query.plan) continue;
    ++planning;
    const auto cats = q.query.plan->StopCategories();
    for (Category a : cats) {
      for (Category b : cats) {
        ASSERT_FALSE(map.Excluded(CategorySlug(a), CategorySlug(b)))
            << q.question_id;
      }
    }
  }
  EXPECT_GT(planning, 300);
}

TEST(GenerateDatasetTest, DeterministicAndSeedSensitive) {
  const auto again = GenerateDataset(DefaultMap(), 7);
  EXPECT_EQ(again, DefaultDataset());
  EXPECT_EQ(SerializeQuestions(DefaultMap(), again),
            SerializeQuestions(DefaultMap(), DefaultDataset()));
  EXPECT_NE(GenerateDataset(DefaultMap(), 8), DefaultDataset());
}

TEST(GenerateDatasetTest, CustomCounts) {
  GeneratorConfig config;
  config.easy = 7;
  config.medium = 3;
  config.hard = 11;
  const auto qs = GenerateDataset(DefaultMap(), 1, config);
  EXPECT_EQ(qs.size(), 21u);
  config.medium = 0;
  EXPECT_THROW(GenerateDataset(DefaultMap(), 1, config), ConfigError);
}

TEST(InstantiateTest, SameRngStateSameInstance) {
  const Template& t = DefaultTemplate(QuestionCategory::kCustomDwellTimePlanning);
  Rng a(5, 9);
  Rng b(5, 9);
  EXPECT_EQ(InstantiateQuestion(t, DefaultMap(), a),
            InstantiateQuestion(t, DefaultMap(), b));
}

TEST(InstantiateTest, DomainExhaustedIsAGenerationError) {
  testing::MapBuilder b;
  b.Add(Category::kApartment, 0, 0);
  b.Add(Category::kCafe, 1, 0);
  const WorldMap tiny = b.Build();
  Rng rng(1);
  EXPECT_THROW(InstantiateQuestion(
                   DefaultTemplate(QuestionCategory::kRouteComparison), tiny, rng),
               GenerationError);
  GeneratorConfig config;
  config.easy = 6;
  config.medium = 5;
  config.hard = 5;
  try {
    GenerateDataset(tiny, 1, config);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    EXPECT_NE(std::string(e.what()).find("template "), std::string::npos);
  }
}

TEST(InstantiateTest, PreferenceBrandBelongsToCategory) {
  for (const auto& q : DefaultDataset()) {
    if (q.category != QuestionCategory::kPreferenceAwarePlanning) continue;
    const auto& prefs = q.query.plan->brand_preferences;
    ASSERT_EQ(prefs.size(), 1u);
    const auto& [c, brand] = *prefs.begin();
    bool found = false;
    for (PoiId id : DefaultMap().OfCategory(c)) {
      found |= DefaultMap().poi(id).brand == brand;
    }
    EXPECT_TRUE(found) << q.question_id;
  }
}

TEST(ParaphraseTest, TextOnly) {
  const QuestionInstance& q = DefaultDataset()[250];
  EXPECT_EQ(ParaphraseHook(q, [](std::string_view s) { return std::string(s); }), q);
  const QuestionInstance upper = ParaphraseHook(q, [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  });
  EXPECT_NE(upper.text, q.text);
  EXPECT_EQ(upper.query, q.query);
  EXPECT_EQ(upper.slots, q.slots);
  EXPECT_EQ(ParaphraseHook(q, [](std::string_view) { return std::string(); }), q);
}

TEST(QuestionIoTest, RoundTrip) {
  const std::string text = SerializeQuestions(DefaultMap(), DefaultDataset());
  const auto back = ParseQuestions(DefaultMap(), text);
  EXPECT_EQ(back, DefaultDataset());
  testing::TempDir dir;
  SaveQuestions(DefaultMap(), DefaultDataset(), dir / "q.json");
  EXPECT_EQ(LoadQuestions(DefaultMap(), dir / "q.json"), DefaultDataset());
}

nlohmann::ordered_json QuestionsJson() {
  return nlohmann::ordered_json::parse(
      SerializeQuestions(DefaultMap(), DefaultDataset()));
}

TEST(QuestionIoTest, RejectsOtherMap) {
  EXPECT_THROW(ParseQuestions(GenerateMap(8), QuestionsJson().dump()),
               ValidationError);
}

TEST(QuestionIoTest, RejectsQueryThatDisagreesWithSlots) {
  auto j = QuestionsJson();
  j["questions"][300]["query"]["plan"]["departure"] = "03:00";
  EXPECT_THROW(ParseQuestions(DefaultMap(), j.dump()), ValidationError);
}

TEST(QuestionIoTest, RejectsDuplicateId) {
  auto j = QuestionsJson();
  j["questions"][1]["id"] = j["questions"][0]["id"];
  j["questions"][1] = j["questions"][0];
  EXPECT_THROW(ParseQuestions(DefaultMap(), j.dump()), ValidationError);
}

TEST(QuestionIoTest, RejectsTextMissingASlotValue) {
  auto j = QuestionsJson();
  j["questions"][20]["text"] = "What is the answer?";
  EXPECT_THROW(ParseQuestions(DefaultMap(), j.dump()), ValidationError);
}

TEST(QuestionIoTest, RejectsUnknownSlot) {
  auto j = QuestionsJson();
  j["questions"][0]["slots"]["mood"] = "happy";
  EXPECT_THROW(ParseQuestions(DefaultMap(), j.dump()), ParseError);
}

}  // namespace
}  // namespace topkit
