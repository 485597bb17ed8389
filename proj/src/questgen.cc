#include "topkit/questgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "io_util.h"
#include "json_util.h"

namespace topkit {

using internal::As;
using internal::Field;
using internal::FieldAs;

namespace {

bool IsCategorySlot(std::string_view name) {
  return name.starts_with("category_");
}

std::string FormatMinutes(Minutes m) {
  if (m.centi() % 100 == 0) return std::to_string(m.centi() / 100);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", m.value());
  return buf;
}

std::string JoinTimes(const std::vector<ClockTime>& times) {
  std::string out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) out += i + 1 == times.size() ? " and " : ", ";
    out += times[i].ToString();
  }
  return out;
}

std::string_view ObjectivePhrase(Objective o) {
  switch (o) {
    case Objective::kTotalTime: return "the shortest total time";
    case Objective::kTotalPrice: return "the lowest total price level";
    case Objective::kTotalDwell: return "the least total time spent at stops";
  }
  return "";
}

std::string Surface(const WorldMap& map, const SlotValue& value) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PoiId>) {
          return map.poi(v).name;
        } else if constexpr (std::is_same_v<T, Category>) {
          return std::string(CategoryNoun(v));
        } else if constexpr (std::is_same_v<T, ClockTime>) {
          return v.ToString();
        } else if constexpr (std::is_same_v<T, Minutes>) {
          return FormatMinutes(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, Objective>) {
          return std::string(ObjectivePhrase(v));
        } else {
          return JoinTimes(v);
        }
      },
      value);
}

std::string Render(const WorldMap& map, const std::string& pattern,
                   const SlotBindings& slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    const std::size_t open = pattern.find('{', pos);
    if (open == std::string::npos) {
      out.append(pattern, pos, std::string::npos);
      break;
    }
    const std::size_t close = pattern.find('}', open);
    if (close == std::string::npos) {
      throw GenerationError("unterminated slot in pattern '" + pattern + "'");
    }
    out.append(pattern, pos, open - pos);
    const std::string name = pattern.substr(open + 1, close - open - 1);
    auto it = std::find_if(slots.begin(), slots.end(),
                           [&](const auto& s) { return s.first == name; });
    if (it == slots.end()) {
      throw GenerationError("pattern slot '" + name + "' has no binding");
    }
    out += Surface(map, it->second);
    pos = close + 1;
  }
  return out;
}

template <typename T>
const T* Get(const SlotBindings& slots, std::string_view name) {
  for (const auto& [n, v] : slots) {
    if (n == name) return std::get_if<T>(&v);
  }
  return nullptr;
}

template <typename T>
const T& Require(const SlotBindings& slots, std::string_view name) {
  const T* v = Get<T>(slots, name);
  if (!v) {
    throw ValidationError("slot '" + std::string(name) +
                          "' is missing or has the wrong type");
  }
  return *v;
}

std::vector<Category> BoundCategories(const SlotBindings& slots) {
  std::vector<Category> out;
  for (const auto& [name, v] : slots) {
    if (IsCategorySlot(name)) {
      if (const auto* c = std::get_if<Category>(&v)) out.push_back(*c);
    }
  }
  return out;
}

std::vector<std::string> BrandsOf(const WorldMap& map, Category c) {
  std::set<std::string> brands;
  for (PoiId id : map.OfCategory(c)) {
    if (map.poi(id).brand) brands.insert(*map.poi(id).brand);
  }
  return {brands.begin(), brands.end()};
}

bool ExcludedWithAny(const WorldMap& map, Category c,
                     const std::vector<Category>& bound, bool charge) {
  for (Category b : bound) {
    if (map.Excluded(CategorySlug(c), CategorySlug(b))) return true;
  }
  return charge && map.Excluded(CategorySlug(c), CategorySlug(Category::kCharging));
}

bool DependedOnByBrand(const Template& tmpl, std::string_view name) {
  return std::any_of(tmpl.slots.begin(), tmpl.slots.end(), [&](const auto& s) {
    return s.kind == SlotKind::kBrand && s.depends_on == name;
  });
}

SlotValue DrawSlot(const Template& tmpl, const SlotSpec& spec,
                   const WorldMap& map, Rng& rng,
                   const GeneratorConfig& config, const SlotBindings& bound) {
  switch (spec.kind) {
    case SlotKind::kPoi: {
      std::vector<PoiId> pool;
      for (Category c : spec.categories) {
        for (PoiId id : map.OfCategory(c)) pool.push_back(id);
      }
      std::sort(pool.begin(), pool.end());
      std::set<PoiId> used;
      for (const auto& [n, v] : bound) {
        if (const auto* id = std::get_if<PoiId>(&v)) used.insert(*id);
      }
      const auto free = std::count_if(pool.begin(), pool.end(), [&](PoiId id) {
        return !used.contains(id);
      });
      if (free == 0) {
        throw GenerationError("slot '" + spec.name + "' has no unused POI");
      }
      PoiId id = rng.Pick(pool);
      while (used.contains(id)) id = rng.Pick(pool);
      return id;
    }
    case SlotKind::kCategory: {
      const std::vector<Category> taken = BoundCategories(bound);
      const bool needs_brand = DependedOnByBrand(tmpl, spec.name);
      auto ok = [&](Category c) {
        if (std::find(taken.begin(), taken.end(), c) != taken.end()) return false;
        if (ExcludedWithAny(map, c, taken, tmpl.charge_required)) return false;
        if (tmpl.charge_required && c == Category::kCharging) return false;
        if (map.OfCategory(c).empty()) return false;
        return !needs_brand || !BrandsOf(map, c).empty();
      };
      if (std::none_of(spec.categories.begin(), spec.categories.end(), ok)) {
        throw GenerationError("slot '" + spec.name +
                              "' has no admissible category");
      }
      Category c = rng.Pick(spec.categories);
      while (!ok(c)) c = rng.Pick(spec.categories);
      return c;
    }
    case SlotKind::kLookupTime:
      return rng.Pick(config.lookup_times);
    case SlotKind::kDepartureTime:
      return rng.Pick(config.departure_times);
    case SlotKind::kCandidateTimes:
      return config.candidate_times;
    case SlotKind::kDwellOverride:
      return Minutes::Whole(rng.Pick(config.dwell_override_minutes));
    case SlotKind::kBrand: {
      const Category* c = Get<Category>(bound, spec.depends_on);
      if (!c) {
        throw GenerationError("brand slot depends on unbound '" +
                              spec.depends_on + "'");
      }
      const auto brands = BrandsOf(map, *c);
      if (brands.empty()) {
        throw GenerationError("no brands for " + std::string(CategorySlug(*c)));
      }
      return rng.Pick(brands);
    }
    case SlotKind::kObjective: {
      static const std::vector<Objective> kPool = {Objective::kTotalPrice,
                                                   Objective::kTotalDwell};
      return rng.Pick(kPool);
    }
  }
  throw GenerationError("unknown slot kind");
}

QuerySpec PlanSpec(const SlotBindings& slots, ClockTime departure) {
  QuerySpec q;
  q.origin = Require<PoiId>(slots, "origin");
  q.destination = Require<PoiId>(slots, "destination");
  q.departures = {departure};
  q.fixed_departure = true;
  return q;
}

std::string ExpectedTemplateId(QuestionCategory c) {
  return std::string(LevelSlug(LevelOf(c))) + "." +
         std::string(QuestionCategorySlug(c)) + ".v1";
}

SlotValue SlotValueFromJson(const WorldMap& map, const std::string& name,
                            const Json& j, const std::string& ctx) {
  if (name == "poi_a" || name == "poi_b" || name == "origin" ||
      name == "destination") {
    return PoiRefFromJson(map, j, ctx);
  }
  if (IsCategorySlot(name)) {
    try {
      return ParseCategory(As<std::string>(j, ctx));
    } catch (const ParseError& e) {
      throw ParseError(ctx + ": " + e.what());
    }
  }
  if (name == "time") {
    try {
      return ClockTime::Parse(As<std::string>(j, ctx));
    } catch (const ParseError& e) {
      throw ParseError(ctx + ": " + e.what());
    }
  }
  if (name == "dwell_override") return MinutesFromJson(j, ctx);
  if (name == "brand") return As<std::string>(j, ctx);
  if (name == "objective") {
    try {
      return ParseObjective(As<std::string>(j, ctx));
    } catch (const ParseError& e) {
      throw ParseError(ctx + ": " + e.what());
    }
  }
  if (name == "candidates") {
    internal::ArrayOf(j, static_cast<std::size_t>(-1), ctx);
    std::vector<ClockTime> times;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string ictx = ctx + "[" + std::to_string(i) + "]";
      try {
        times.push_back(ClockTime::Parse(As<std::string>(j[i], ictx)));
      } catch (const ParseError& e) {
        throw ParseError(ictx + ": " + e.what());
      }
    }
    return times;
  }
  throw ParseError(ctx + ": unknown slot");
}

}  // namespace

const SlotValue* QuestionInstance::Slot(std::string_view name) const {
  for (const auto& [n, v] : slots) {
    if (n == name) return &v;
  }
  return nullptr;
}

QuestionInstance InstantiateQuestion(const Template& tmpl, const WorldMap& map,
                                     Rng& rng, const GeneratorConfig& config) {
  QuestionInstance inst;
  inst.template_id = tmpl.template_id;
  inst.level = tmpl.level;
  inst.category = tmpl.category;
  for (const SlotSpec& spec : tmpl.slots) {
    inst.slots.emplace_back(spec.name,
                            DrawSlot(tmpl, spec, map, rng, config, inst.slots));
  }
  inst.text = Render(map, tmpl.text_pattern, inst.slots);
  inst.query = BuildQuestionQuery(tmpl.category, inst.slots,
                                  tmpl.charge_required);
  return inst;
}

std::vector<QuestionInstance> GenerateDataset(const WorldMap& map,
                                              std::uint64_t seed,
                                              const GeneratorConfig& config) {
  const std::vector<Template> templates = BuildTemplates(config);
  std::vector<QuestionInstance> out;
  std::uint64_t stream = 0;
  for (Level level : kAllLevels) {
    std::vector<const Template*> pool;
    for (const Template& t : templates) {
      if (t.level == level) pool.push_back(&t);
    }
    const int count = level == Level::kEasy     ? config.easy
                      : level == Level::kMedium ? config.medium
                                                : config.hard;
    std::vector<int> ordinal(pool.size(), 0);
    for (int i = 0; i < count; ++i) {
      const std::size_t k = static_cast<std::size_t>(i) % pool.size();
      const Template& tmpl = *pool[k];
      Rng rng(seed, stream++);
      QuestionInstance inst;
      try {
        inst = InstantiateQuestion(tmpl, map, rng, config);
      } catch (const GenerationError& e) {
        throw GenerationError("template " + tmpl.template_id + ": " + e.what());
      }
      char id[96];
      std::snprintf(id, sizeof(id), "L%d-%s-%03d", LevelNumber(level),
                    std::string(QuestionCategorySlug(tmpl.category)).c_str(),
                    ++ordinal[k]);
      inst.question_id = id;
      out.push_back(std::move(inst));
    }
  }
  return out;
}

QuestionInstance ParaphraseHook(const QuestionInstance& instance,
                                const TextTransformer& transformer) {
  QuestionInstance out = instance;
  if (!transformer) return out;
  std::string text = transformer(instance.text);
  if (!text.empty()) out.text = std::move(text);
  return out;
}

QuestionQuery BuildQuestionQuery(QuestionCategory category,
                                 const SlotBindings& slots,
                                 bool charge_required) {
  using QC = QuestionCategory;
  QuestionQuery q;
  switch (category) {
    case QC::kNameLookup:
      q.category = Require<Category>(slots, "category_1");
      return q;
    case QC::kTravelTimeDriving:
      q.poi_a = Require<PoiId>(slots, "poi_a");
      q.poi_b = Require<PoiId>(slots, "poi_b");
      q.time = Require<ClockTime>(slots, "time");
      return q;
    case QC::kTravelTimeWalking:
    case QC::kDistanceQuery:
      q.poi_a = Require<PoiId>(slots, "poi_a");
      q.poi_b = Require<PoiId>(slots, "poi_b");
      return q;
    case QC::kDwellTimeLookup:
      q.poi_a = Require<PoiId>(slots, "poi_a");
      q.time = Require<ClockTime>(slots, "time");
      return q;
    case QC::kNearestNeighborSearch:
      q.poi_a = Require<PoiId>(slots, "origin");
      q.category = Require<Category>(slots, "category_1");
      return q;
    default:
      break;
  }

  const PoiId o = Require<PoiId>(slots, "origin");
  const PoiId d = Require<PoiId>(slots, "destination");
  switch (category) {
    case QC::kPlanEvaluation: {
      const ClockTime t = Require<ClockTime>(slots, "time");
      q.routes = {Itinerary{{o, Require<PoiId>(slots, "poi_a"),
                             Require<PoiId>(slots, "poi_b"), d},
                            t}};
      q.plan = PlanSpec(slots, t);
      return q;
    }
    case QC::kRouteComparison: {
      const ClockTime t = Require<ClockTime>(slots, "time");
      q.routes = {Itinerary{{o, Require<PoiId>(slots, "poi_a"), d}, t},
                  Itinerary{{o, Require<PoiId>(slots, "poi_b"), d}, t}};
      q.plan = PlanSpec(slots, t);
      return q;
    }
    case QC::kContextualRecommendation: {
      const ClockTime t = Require<ClockTime>(slots, "time");
      q.routes = {Itinerary{{o, Require<PoiId>(slots, "poi_a"), d}, t}};
      q.category = Require<Category>(slots, "category_1");
      q.plan = PlanSpec(slots, t);
      return q;
    }
    case QC::kTemporalOptimization: {
      q.candidates = Require<std::vector<ClockTime>>(slots, "candidates");
      if (q.candidates.empty()) {
        throw ValidationError("slot 'candidates' is empty");
      }
      QuerySpec spec = PlanSpec(slots, q.candidates.front());
      spec.departures = q.candidates;
      spec.fixed_departure = false;
      spec.required_categories = BoundCategories(slots);
      q.plan = std::move(spec);
      return q;
    }
    default:
      break;
  }

  // Optimizing workflows.
  QuerySpec spec = PlanSpec(slots, Require<ClockTime>(slots, "time"));
  spec.required_categories = BoundCategories(slots);
  if (spec.required_categories.empty()) {
    throw ValidationError("planning question binds no category");
  }
  if (const auto* o = Get<Objective>(slots, "objective")) spec.objective = *o;
  if (const auto* b = Get<std::string>(slots, "brand")) {
    spec.brand_preferences[Require<Category>(slots, "category_1")] = *b;
  }
  if (const auto* m = Get<Minutes>(slots, "dwell_override")) {
    spec.dwell_overrides[Require<Category>(slots, "category_1")] = *m;
  }
  spec.charge_required = charge_required;
  q.plan = std::move(spec);
  return q;
}

void ValidateInstance(const WorldMap& map, const QuestionInstance& inst) {
  const std::string ctx = "question " + inst.question_id;
  auto fail = [&](const std::string& what) {
    throw ValidationError(ctx + ": " + what);
  };
  if (inst.level != LevelOf(inst.category)) fail("level does not match category");
  if (inst.template_id != ExpectedTemplateId(inst.category)) {
    fail("template_id '" + inst.template_id + "' does not match category");
  }
  std::set<PoiId> pois;
  std::set<std::string> names;
  for (const auto& [name, v] : inst.slots) {
    if (!names.insert(name).second) fail("slot '" + name + "' bound twice");
    if (const auto* id = std::get_if<PoiId>(&v)) {
      if (!map.Contains(*id)) fail("slot '" + name + "' names an unknown POI");
      if (!pois.insert(*id).second) fail("POI slots are not distinct");
    }
  }
  const std::vector<Category> cats = BoundCategories(inst.slots);
  for (std::size_t i = 0; i < cats.size(); ++i) {
    for (std::size_t j = i + 1; j < cats.size(); ++j) {
      if (cats[i] == cats[j]) fail("duplicate category slot");
      if (map.Excluded(CategorySlug(cats[i]), CategorySlug(cats[j]))) {
        fail("bound categories form an excluded pair");
      }
    }
  }
  for (const auto& [name, v] : inst.slots) {
    if (std::holds_alternative<std::vector<ClockTime>>(v)) {
      for (ClockTime t : std::get<std::vector<ClockTime>>(v)) {
        if (inst.text.find(t.ToString()) == std::string::npos) {
          fail("text omits candidate " + t.ToString());
        }
      }
      continue;
    }
    const std::string surface = Surface(map, v);
    if (inst.text.find(surface) == std::string::npos) {
      fail("text omits slot '" + name + "' value '" + surface + "'");
    }
  }
  QuestionQuery expected;
  try {
    expected = BuildQuestionQuery(inst.category, inst.slots,
                                  DefaultTemplate(inst.category).charge_required);
  } catch (const ValidationError& e) {
    fail(e.what());
  }
  if (!(expected == inst.query)) fail("query does not match slot bindings");
  if (inst.query.plan) {
    try {
      ValidateQuery(map, *inst.query.plan);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
  }
}

Json SlotValueToJson(const WorldMap& map, const SlotValue& value) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PoiId>) {
          return map.poi(v).name;
        } else if constexpr (std::is_same_v<T, Category>) {
          return CategorySlug(v);
        } else if constexpr (std::is_same_v<T, ClockTime>) {
          return v.ToString();
        } else if constexpr (std::is_same_v<T, Minutes>) {
          return MinutesToJson(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, Objective>) {
          return ObjectiveSlug(v);
        } else {
          Json arr = Json::array();
          for (ClockTime t : v) arr.push_back(t.ToString());
          return arr;
        }
      },
      value);
}

Json QuestionQueryToJson(QuestionCategory category, const QuestionQuery& q) {
  Json j;
  j["workflow"] = QuestionCategorySlug(category);
  if (q.category) j["category"] = CategorySlug(*q.category);
  if (q.poi_a) j["poi_a"] = q.poi_a->v;
  if (q.poi_b) j["poi_b"] = q.poi_b->v;
  if (q.time) j["time"] = q.time->ToString();
  if (!q.routes.empty()) {
    Json routes = Json::array();
    for (const Itinerary& it : q.routes) routes.push_back(ItineraryToJson(it));
    j["routes"] = std::move(routes);
  }
  if (!q.candidates.empty()) {
    Json times = Json::array();
    for (ClockTime t : q.candidates) times.push_back(t.ToString());
    j["candidates"] = std::move(times);
  }
  if (q.plan) j["plan"] = QueryToJson(*q.plan);
  return j;
}

Json InstanceToJson(const WorldMap& map, const QuestionInstance& inst) {
  Json j;
  j["id"] = inst.question_id;
  j["level"] = LevelSlug(inst.level);
  j["category"] = QuestionCategorySlug(inst.category);
  j["template_id"] = inst.template_id;
  j["text"] = inst.text;
  Json slots = Json::object();
  for (const auto& [name, v] : inst.slots) slots[name] = SlotValueToJson(map, v);
  j["slots"] = std::move(slots);
  j["query"] = QuestionQueryToJson(inst.category, inst.query);
  return j;
}

QuestionInstance InstanceFromJson(const WorldMap& map, const Json& j,
                                  std::string_view ctx_in) {
  std::string ctx(ctx_in);
  QuestionInstance inst;
  inst.question_id = FieldAs<std::string>(j, "id", ctx);
  ctx = "question " + inst.question_id;
  try {
    inst.level = ParseLevel(FieldAs<std::string>(j, "level", ctx));
    inst.category =
        ParseQuestionCategory(FieldAs<std::string>(j, "category", ctx));
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
  inst.template_id = FieldAs<std::string>(j, "template_id", ctx);
  inst.text = FieldAs<std::string>(j, "text", ctx);
  const Json& slots = Field(j, "slots", ctx);
  if (!slots.is_object()) throw ParseError(ctx + ".slots: expected an object");
  for (const auto& [name, v] : slots.items()) {
    inst.slots.emplace_back(
        name, SlotValueFromJson(map, name, v, ctx + ".slots." + name));
  }
  try {
    inst.query = BuildQuestionQuery(
        inst.category, inst.slots, DefaultTemplate(inst.category).charge_required);
  } catch (const ValidationError& e) {
    throw ValidationError(ctx + ": " + e.what());
  }
  if (QuestionQueryToJson(inst.category, inst.query) != Field(j, "query", ctx)) {
    throw ValidationError(ctx + ".query: does not match the slot bindings");
  }
  ValidateInstance(map, inst);
  return inst;
}

Json MapRefJson(const WorldMap& map) {
  Json j;
  j["seed"] = map.seed();
  j["hash"] = MapHash(map);
  return j;
}

std::string SerializeQuestions(const WorldMap& map,
                               const std::vector<QuestionInstance>& questions) {
  Json j;
  j["map_ref"] = MapRefJson(map);
  Json arr = Json::array();
  for (const auto& q : questions) arr.push_back(InstanceToJson(map, q));
  j["questions"] = std::move(arr);
  return j.dump() + "\n";
}

std::vector<QuestionInstance> ParseQuestions(const WorldMap& map,
                                             std::string_view json_text) {
  const Json j = internal::ParseJsonText(json_text, "questions");
  const Json& ref = Field(j, "map_ref", "questions");
  const auto hash = FieldAs<std::string>(ref, "hash", "questions.map_ref");
  if (hash != MapHash(map)) {
    throw ValidationError("questions.map_ref.hash: " + hash +
                          " does not match the map (" + MapHash(map) + ")");
  }
  const Json& arr = internal::ArrayOf(Field(j, "questions", "questions"),
                                      static_cast<std::size_t>(-1),
                                      "questions.questions");
  std::vector<QuestionInstance> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(InstanceFromJson(
        map, arr[i], "questions[" + std::to_string(i) + "]"));
    if (!ids.insert(out.back().question_id).second) {
      throw ValidationError("duplicate question id " + out.back().question_id);
    }
  }
  return out;
}

void SaveQuestions(const WorldMap& map,
                   const std::vector<QuestionInstance>& questions,
                   const std::filesystem::path& path) {
  internal::WriteFile(path, SerializeQuestions(map, questions));
}

std::vector<QuestionInstance> LoadQuestions(const WorldMap& map,
                                            const std::filesystem::path& path) {
  return ParseQuestions(map, internal::ReadFile(path));
}

}  // namespace topkit
