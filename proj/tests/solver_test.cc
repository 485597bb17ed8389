#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "test_support.h"
#include "topkit/rng.h"
#include "topkit/solver.h"
#include "topkit/timemodel.h"

namespace topkit {
namespace {

using testing::MapBuilder;
using testing::ReferenceTotalCenti;

const WorldMap& DefaultMap() {
  static const WorldMap map = GenerateMap(7);
  return map;
}

QuerySpec Fixed(PoiId o, PoiId d, ClockTime t, std::vector<Category> cats = {}) {
  QuerySpec q;
  q.origin = o;
  q.destination = d;
  q.departures = {t};
  q.required_categories = std::move(cats);
  return q;
}

// Random planning query on the default map.
QuerySpec RandomQuery(Rng& rng, const WorldMap& map, int max_categories) {
  std::vector<PoiId> ends = map.OfCategory(Category::kApartment);
  for (PoiId id : map.OfCategory(Category::kCompany)) ends.push_back(id);
  rng.Shuffle(ends);
  QuerySpec q;
  q.origin = ends[0];
  q.destination = ends[1];
  std::vector<Category> cats(kDwellCategories.begin(), kDwellCategories.end());
  rng.Shuffle(cats);
  const int k = static_cast<int>(rng.IntIn(0, max_categories));
  q.required_categories.assign(cats.begin(), cats.begin() + k);
  if (rng.Index(4) == 0) {
    q.departures = {ClockTime::At(static_cast<int>(rng.IntIn(0, 23)), 0),
                    ClockTime::At(static_cast<int>(rng.IntIn(0, 23)), 30)};
    q.fixed_departure = false;
  } else {
    q.departures = {ClockTime::At(static_cast<int>(rng.IntIn(0, 23)),
                                  static_cast<int>(rng.IntIn(0, 59)))};
  }
  for (Category c : q.required_categories) {
    if ((c == Category::kCafe || c == Category::kCharging) && rng.Index(3) == 0) {
      const auto pool = map.OfCategory(c);
      q.brand_preferences[c] = *map.poi(rng.Pick(pool)).brand;
    }
    if (rng.Index(4) == 0) {
      q.dwell_overrides[c] = Minutes::Whole(rng.IntIn(5, 45));
    }
  }
  const bool has_charge =
      std::find(q.required_categories.begin(), q.required_categories.end(),
                Category::kCharging) != q.required_categories.end();
  if (!has_charge && k < max_categories && rng.Index(3) == 0) {
    q.charge_required = true;
  }
  const auto o = rng.Index(6);
  if (o == 0) q.objective = Objective::kTotalPrice;
  if (o == 1) q.objective = Objective::kTotalDwell;
  return q;
}

// ---- evaluation ----------------------------------------------------------

TEST(EvaluatePlanTest, HandComputedTrip) {
  MapBuilder b;
  const PoiId home = b.Add(Category::kApartment, 0, 0);
  const PoiId cafe = b.Add(Category::kCafe, 1, 0, 20);
  const PoiId work = b.Add(Category::kCompany, 2, 0);
  b.Drive(home, cafe, 10);
  b.Drive(cafe, work, 12);
  const WorldMap map = b.Build();
  const Itinerary it{{home, cafe, work}, ClockTime::At(9, 0)};
  const EvaluatedPlan plan = EvaluatePlan(map, it, Fixed(home, work, it.departure));
  ASSERT_EQ(plan.legs.size(), 2u);
  EXPECT_EQ(plan.origin_dwell, Minutes());
  EXPECT_EQ(plan.legs[0].travel_min, 10);
  EXPECT_EQ(plan.legs[0].arrive, Minutes::Whole(9 * 60 + 10));
  EXPECT_EQ(plan.legs[0].dwell_min, Minutes::Whole(6));
  EXPECT_EQ(plan.legs[1].depart, Minutes::Whole(9 * 60 + 16));
  EXPECT_EQ(plan.legs[1].dwell_min, Minutes());
  EXPECT_EQ(plan.total, Minutes::Whole(28));
  EXPECT_TRUE(plan.feasible);
}

TEST(EvaluatePlanTest, EachLegUsesItsOwnBucket) {
  MapBuilder b;
  const PoiId home = b.Add(Category::kApartment, 0, 0);
  const PoiId gym = b.Add(Category::kGym, 1, 0);
  const PoiId work = b.Add(Category::kCompany, 2, 0);
  b.Drive(home, gym, 10);
  for (Bucket bucket : kAllBuckets) b.DriveAt(bucket, gym, work, 10);
  b.DriveAt(Bucket::k1800, gym, work, 40);
  const WorldMap map = b.Build();
  // 14:30 + 10 drive + 25 gym = 15:05, inside the 18:00 window.
  const Itinerary it{{home, gym, work}, ClockTime::At(14, 30)};
  const EvaluatedPlan plan = EvaluatePlan(map, it, Fixed(home, work, it.departure));
  EXPECT_EQ(plan.legs[1].travel_min, 40);
  EXPECT_EQ(plan.total, Minutes::Whole(75));
}

TEST(EvaluatePlanTest, MatchesReferenceOnRandomItineraries) {
  const WorldMap& map = DefaultMap();
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PoiId> ids(map.size());
    for (int i = 0; i < map.size(); ++i) ids[i] = PoiId{i};
    rng.Shuffle(ids);
    const std::size_t len = 2 + rng.Index(5);
    std::vector<PoiId> stops(ids.begin(), ids.begin() + len);
    const int dep = static_cast<int>(rng.IntIn(0, 1439));
    QuerySpec q = Fixed(stops.front(), stops.back(), ClockTime::FromMinuteOfDay(dep));
    std::map<Category, std::int64_t> overrides;
    if (rng.Index(2) == 0) {
      const Category c = kDwellCategories[rng.Index(5)];
      const int m = static_cast<int>(rng.IntIn(0, 60));
      q.dwell_overrides[c] = Minutes::Whole(m);
      overrides[c] = m * 100;
    }
    const EvaluatedPlan plan =
        EvaluatePlan(map, Itinerary{stops, q.departures[0]}, q);
    ASSERT_EQ(plan.total.centi(), ReferenceTotalCenti(map, stops, dep, overrides))
        << "trial " << trial;
    ASSERT_EQ(plan.legs.size(), stops.size() - 1);
  }
}

TEST(EvaluatePlanTest, RejectsBadItineraries) {
  const WorldMap& map = DefaultMap();
  const QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(9, 0));
  EXPECT_THROW(EvaluatePlan(map, {{PoiId{0}}, ClockTime::At(9, 0)}, q),
               ValidationError);
  EXPECT_THROW(
      EvaluatePlan(map, {{PoiId{0}, PoiId{20}, PoiId{0}}, ClockTime::At(9, 0)}, q),
      ValidationError);
  EXPECT_THROW(EvaluatePlan(map, {{PoiId{0}, PoiId{80}}, ClockTime::At(9, 0)}, q),
               LookupError);
}

// ---- feasibility ---------------------------------------------------------

struct FeasibilityFixture {
  WorldMap map;
  PoiId home, cafe, charger, work;
};

FeasibilityFixture MakeFeasibilityMap() {
  MapBuilder b;
  FeasibilityFixture f;
  f.home = b.Add(Category::kApartment, 0, 0);
  f.cafe = b.Add(Category::kCafe, 1, 0, 0, "Copper Cup");
  f.charger = b.Add(Category::kCharging, 5, 5, 0, "VoltPoint");
  f.work = b.Add(Category::kCompany, 2, 0);
  b.Hours(f.cafe, 600, 1200);
  b.Drive(f.home, f.cafe, 10);
  b.Drive(f.cafe, f.work, 10);
  f.map = b.Build();
  return f;
}

std::vector<std::string> Tags(const std::vector<Violation>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.Tag());
  return out;
}

TEST(FeasibilityTest, ClosedAtArrival) {
  const auto f = MakeFeasibilityMap();
  const Itinerary it{{f.home, f.cafe, f.work}, ClockTime::At(9, 0)};
  const auto plan = EvaluatePlan(f.map, it, Fixed(f.home, f.work, it.departure));
  EXPECT_FALSE(plan.feasible);
  EXPECT_EQ(Tags(plan.violations),
            std::vector<std::string>{"closed_at_arrival(1)"});
}

TEST(FeasibilityTest, DwellPastClose) {
  const auto f = MakeFeasibilityMap();
  // Arrive 19:58, five-minute stay runs past 20:00.
  const Itinerary it{{f.home, f.cafe, f.work}, ClockTime::At(19, 48)};
  EXPECT_EQ(Tags(CheckFeasibility(f.map, it, Fixed(f.home, f.work, it.departure))),
            std::vector<std::string>{"dwell_past_close(1)"});
}

TEST(FeasibilityTest, MissingCategoryAndCharge) {
  const auto f = MakeFeasibilityMap();
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(12, 0), {Category::kGym});
  q.charge_required = true;
  const Itinerary it{{f.home, f.cafe, f.work}, ClockTime::At(12, 0)};
  EXPECT_EQ(Tags(CheckFeasibility(f.map, it, q)),
            (std::vector<std::string>{"missing_category(gym)", "missing_charge"}));
}

TEST(FeasibilityTest, BrandMismatch) {
  const auto f = MakeFeasibilityMap();
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(12, 0), {Category::kCafe});
  q.brand_preferences[Category::kCafe] = "Bean Street";
  const Itinerary it{{f.home, f.cafe, f.work}, ClockTime::At(12, 0)};
  EXPECT_EQ(Tags(CheckFeasibility(f.map, it, q)),
            std::vector<std::string>{"brand_mismatch(1)"});
}

TEST(ViolationTest, TagRoundTrip) {
  for (const char* tag : {"missing_category(cafe)", "closed_at_arrival(12)",
                          "dwell_past_close(3)", "brand_mismatch(0)",
                          "missing_charge"}) {
    EXPECT_EQ(Violation::Parse(tag).Tag(), tag);
  }
  EXPECT_THROW(Violation::Parse("closed_at_arrival(x)"), ParseError);
  EXPECT_THROW(Violation::Parse("nope(1)"), ParseError);
  EXPECT_THROW(Violation::Parse("missing_category(gas)"), ParseError);
}

// ---- query validation ----------------------------------------------------

TEST(ValidateQueryTest, Invariants) {
  const WorldMap& map = DefaultMap();
  auto q = Fixed(PoiId{0}, PoiId{0}, ClockTime::At(9, 0));
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
  q.destination = PoiId{6};
  q.required_categories = {Category::kCafe, Category::kCafe};
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
  q.required_categories = {Category::kCafe, Category::kGym, Category::kMarket,
                           Category::kRestaurant};
  q.charge_required = true;
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
  q.charge_required = false;
  EXPECT_NO_THROW(ValidateQuery(map, q));
  q.brand_preferences[Category::kCharging] = "VoltPoint";
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
  q.brand_preferences.clear();
  q.departures.push_back(ClockTime::At(10, 0));
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
}

TEST(ValidateQueryTest, ExcludedPair) {
  MapBuilder b;
  const PoiId home = b.Add(Category::kApartment, 0, 0);
  b.Add(Category::kCafe, 1, 0);
  b.Add(Category::kGym, 1, 1);
  const PoiId work = b.Add(Category::kCompany, 2, 0);
  const WorldMap map = b.Build({{"cafe", "gym"}});
  const auto q = Fixed(home, work, ClockTime::At(12, 0),
                       {Category::kGym, Category::kCafe});
  EXPECT_THROW(ValidateQuery(map, q), ValidationError);
  EXPECT_THROW(SolveOptimal(map, q), ValidationError);
}

// ---- absorption ----------------------------------------------------------

struct AbsorptionFixture {
  WorldMap map;
  PoiId home, charger, cafe, work;
};

// Charger and cafe 5 minutes apart on foot; the cafe runs at popularity 20.
AbsorptionFixture MakeAbsorptionMap(int walk) {
  MapBuilder b;
  AbsorptionFixture f;
  f.home = b.Add(Category::kApartment, 0, 0);
  f.charger = b.Add(Category::kCharging, 4, 0);
  f.cafe = b.Add(Category::kCafe, 4, 0.3, 20);
  f.work = b.Add(Category::kCompany, 8, 0);
  b.Drive(f.home, f.charger, 10);
  b.Drive(f.home, f.cafe, 12);
  b.Drive(f.charger, f.cafe, 3);
  b.Drive(f.charger, f.work, 12);
  b.Drive(f.cafe, f.work, 10);
  b.Drive(f.home, f.work, 20);
  b.Walk(f.charger, f.cafe, walk);
  f.map = b.Build();
  return f;
}

TEST(AbsorptionTest, CafeAbsorbedIntoChargeWindow) {
  const auto f = MakeAbsorptionMap(5);
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(9, 0), {Category::kCafe});
  q.charge_required = true;
  q.dwell_overrides[Category::kCharging] = Minutes::Whole(35);
  const Itinerary it{{f.home, f.charger, f.cafe, f.work}, ClockTime::At(9, 0)};

  const EvaluatedPlan plain = EvaluatePlan(f.map, it, q);
  EXPECT_EQ(plain.total, Minutes::Whole(10 + 35 + 3 + 6 + 10));

  const EvaluatedPlan absorbed = ApplyChargeAbsorption(f.map, plain, q);
  EXPECT_EQ(absorbed.AbsorbedStops(), std::vector<PoiId>{f.cafe});
  ASSERT_EQ(absorbed.legs.size(), 4u);
  const Leg& charge = absorbed.legs[0];
  EXPECT_EQ(charge.to, f.charger);
  EXPECT_EQ(charge.dwell_min, std::max(Minutes::Whole(35),
                                       Minutes::Whole(2 * 5 + 6)));
  EXPECT_EQ(absorbed.legs[1].mode, TravelMode::kWalk);
  EXPECT_EQ(absorbed.legs[1].to, f.cafe);
  EXPECT_EQ(absorbed.legs[1].dwell_min, Minutes::Whole(6));
  EXPECT_EQ(absorbed.legs[2].to, f.charger);
  EXPECT_EQ(absorbed.legs[3].from, f.charger);
  EXPECT_EQ(absorbed.legs[3].to, f.work);
  EXPECT_EQ(absorbed.total, Minutes::Whole(10 + 35 + 12));
  EXPECT_TRUE(absorbed.feasible);
  // Stop order is kept; the cafe still counts as visited.
  EXPECT_EQ(absorbed.itinerary, it);
}

TEST(AbsorptionTest, ErrandBeforeTheChargerAlsoAbsorbs) {
  const auto f = MakeAbsorptionMap(5);
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(9, 0), {Category::kCafe});
  q.dwell_overrides[Category::kCharging] = Minutes::Whole(35);
  const Itinerary it{{f.home, f.cafe, f.charger, f.work}, ClockTime::At(9, 0)};
  const EvaluatedPlan plan = EvaluateWithAbsorption(f.map, it, q);
  EXPECT_EQ(plan.AbsorbedStops(), std::vector<PoiId>{f.cafe});
  EXPECT_EQ(plan.total, Minutes::Whole(10 + 35 + 12));
}

TEST(AbsorptionTest, LoopLongerThanChargeIsNotAbsorbed) {
  const auto f = MakeAbsorptionMap(13);  // 2*13 + 6 = 32 > 30
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(9, 0), {Category::kCafe});
  const Itinerary it{{f.home, f.charger, f.cafe, f.work}, ClockTime::At(9, 0)};
  const EvaluatedPlan plan = EvaluateWithAbsorption(f.map, it, q);
  EXPECT_TRUE(plan.AbsorbedStops().empty());
  EXPECT_EQ(plan, EvaluatePlan(f.map, it, q));
}

TEST(AbsorptionTest, ExactFitIsEligible) {
  const auto f = MakeAbsorptionMap(12);  // 2*12 + 6 = 30
  QuerySpec q = Fixed(f.home, f.work, ClockTime::At(9, 0), {Category::kCafe});
  const Itinerary it{{f.home, f.charger, f.cafe, f.work}, ClockTime::At(9, 0)};
  const EvaluatedPlan plan = EvaluateWithAbsorption(f.map, it, q);
  EXPECT_EQ(plan.AbsorbedStops(), std::vector<PoiId>{f.cafe});
  EXPECT_EQ(plan.legs[0].dwell_min, Minutes::Whole(30));
}

// Reference: stops without the errand, with the charger's stay replaced by
// max(charge, 2 * walk + errand dwell at walk-in time).
std::int64_t ReferenceAbsorbedCenti(const WorldMap& map,
                                    const std::vector<PoiId>& stops, int dep,
                                    std::size_t ch, std::size_t q) {
  auto dwell = [&](PoiId id, std::int64_t at) -> std::int64_t {
    const Poi& p = map.poi(id);
    if (!p.base_dwell) return 0;
    return std::int64_t{*p.base_dwell} *
           (100 + p.popularity[(at / 6000) % 24]);
  };
  const std::int64_t start = std::int64_t{dep} * 100;
  std::int64_t t = start + dwell(stops[0], start);
  std::size_t prev = 0;
  for (std::size_t k = 1; k < stops.size(); ++k) {
    if (k == q) continue;
    const int clock = static_cast<int>((t / 100) % 1440);
    t += 100 * std::int64_t{map.matrix().drive(testing::ReferenceBucket(clock),
                                               stops[prev], stops[k])};
    prev = k;
    if (k + 1 == stops.size()) break;
    std::int64_t stay = dwell(stops[k], t);
    if (k == ch) {
      const std::int64_t w = 100 * std::int64_t{map.matrix().walk(stops[ch], stops[q])};
      stay = std::max(stay, 2 * w + dwell(stops[q], t + w));
    }
    t += stay;
  }
  return t - start;
}

TEST(AbsorptionTest, RandomInstancesNeverLengthenAndMatchReference) {
  Rng rng(404);
  int absorbed_count = 0;
  for (int trial = 0; trial < 150; ++trial) {
    MapBuilder b;
    const PoiId home = b.Add(Category::kApartment, rng.Uniform(0, 10), rng.Uniform(0, 10));
    const double cx = rng.Uniform(0, 10);
    const double cy = rng.Uniform(0, 10);
    const PoiId charger = b.Add(Category::kCharging, cx, cy,
                                static_cast<int>(rng.IntIn(0, 60)));
    const Category errand_cat = rng.Pick(std::vector<Category>{
        Category::kCafe, Category::kMarket, Category::kGym});
    const PoiId errand =
        b.Add(errand_cat, cx + rng.Uniform(0, 0.3), cy + rng.Uniform(0, 0.3),
              static_cast<int>(rng.IntIn(0, 60)));
    const PoiId work = b.Add(Category::kCompany, rng.Uniform(0, 10), rng.Uniform(0, 10));
    b.Walk(charger, errand, static_cast<int>(rng.IntIn(1, 15)));
    const WorldMap map = b.Build();

    std::vector<PoiId> stops = {home, charger, errand, work};
    std::size_t ch = 1;
    std::size_t q = 2;
    if (rng.Index(2) == 0) {
      std::swap(stops[1], stops[2]);
      std::swap(ch, q);
    }
    const int dep = static_cast<int>(rng.IntIn(0, 1439));
    const QuerySpec query =
        Fixed(home, work, ClockTime::FromMinuteOfDay(dep), {errand_cat});
    const Itinerary it{stops, query.departures[0]};
    const EvaluatedPlan plain = EvaluatePlan(map, it, query);
    const EvaluatedPlan best = EvaluateWithAbsorption(map, it, query);
    ASSERT_LE(best.total, plain.total) << "trial " << trial;

    const std::int64_t ref_plain = ReferenceTotalCenti(map, stops, dep);
    ASSERT_EQ(plain.total.centi(), ref_plain);
    const std::int64_t ref_abs = ReferenceAbsorbedCenti(map, stops, dep, ch, q);
    // Fit test recomputed from the plain timeline at the charger.
    const Poi& e = map.poi(errand);
    const std::int64_t w = map.matrix().walk(charger, errand);
    const Leg& into_charger = *std::find_if(
        plain.legs.begin(), plain.legs.end(),
        [&](const Leg& l) { return l.to == charger; });
    std::int64_t charge_arrive = into_charger.arrive.centi();
    if (q < ch) {
      // Without the errand stop the charger is reached straight from home.
      const int clock = static_cast<int>(plain.origin_dwell.centi() / 100 + dep) % 1440;
      charge_arrive = std::int64_t{dep} * 100 + plain.origin_dwell.centi() +
                      100 * std::int64_t{map.matrix().drive(
                                testing::ReferenceBucket(clock), home, charger)};
    }
    const std::int64_t at_errand = charge_arrive + 100 * w;
    const std::int64_t errand_dwell =
        std::int64_t{*e.base_dwell} * (100 + e.popularity[(at_errand / 6000) % 24]);
    const std::int64_t charge = 30 * (100 + map.poi(charger).popularity[
                                                (charge_arrive / 6000) % 24]);
    const bool fits = 200 * w + errand_dwell <= charge;
    const bool improves = ref_abs < ref_plain;
    if (best.AbsorbedStops().empty()) {
      ASSERT_EQ(best.total.centi(), ref_plain);
      ASSERT_FALSE(fits && improves) << "trial " << trial;
    } else {
      ++absorbed_count;
      ASSERT_TRUE(fits && improves) << "trial " << trial;
      ASSERT_EQ(best.total.centi(), ref_abs) << "trial " << trial;
      ASSERT_EQ(best.legs[0].to, charger);
      ASSERT_EQ(best.legs[0].dwell_min.centi(),
                std::max(charge, 200 * w + errand_dwell));
    }
  }
  EXPECT_GT(absorbed_count, 20);
}

// ---- ranking -------------------------------------------------------------

TEST(ObjectiveTest, PriceAndDwellValues) {
  const auto f = MakeAbsorptionMap(5);
  const QuerySpec q = Fixed(f.home, f.work, ClockTime::At(9, 0));
  const Itinerary it{{f.home, f.charger, f.cafe, f.work}, ClockTime::At(9, 0)};
  const EvaluatedPlan plan = EvaluatePlan(f.map, it, q);
  EXPECT_EQ(ObjectiveValue(f.map, plan, Objective::kTotalTime), plan.total.centi());
  EXPECT_EQ(ObjectiveValue(f.map, plan, Objective::kTotalPrice),
            100 * (f.map.poi(f.charger).price_level + f.map.poi(f.cafe).price_level));
  EXPECT_EQ(ObjectiveValue(f.map, plan, Objective::kTotalDwell), 3000 + 600);
}

// ---- search --------------------------------------------------------------

// Independent exhaustive search: every ordering of every POI choice.
EvaluatedPlan ReferenceSearch(const WorldMap& map, const QuerySpec& q) {
  const auto cats = q.StopCategories();
  std::vector<std::vector<PoiId>> pools;
  for (Category c : cats) {
    std::vector<PoiId> pool;
    for (const Poi& p : map.pois()) {
      if (p.category != c || p.id == q.origin || p.id == q.destination) continue;
      auto pref = q.brand_preferences.find(c);
      if (pref != q.brand_preferences.end() && p.brand != pref->second) continue;
      pool.push_back(p.id);
    }
    pools.push_back(pool);
  }
  std::optional<EvaluatedPlan> best;
  std::optional<PlanKey> best_key;
  std::vector<std::size_t> pick(cats.size(), 0);
  std::function<void(std::size_t)> choose = [&](std::size_t i) {
    if (i == cats.size()) {
      std::vector<PoiId> mids;
      for (std::size_t k = 0; k < cats.size(); ++k) mids.push_back(pools[k][pick[k]]);
      std::sort(mids.begin(), mids.end());
      do {
        for (ClockTime t : q.departures) {
          std::vector<PoiId> stops = {q.origin};
          stops.insert(stops.end(), mids.begin(), mids.end());
          stops.push_back(q.destination);
          EvaluatedPlan plan = EvaluateWithAbsorption(map, {stops, t}, q);
          if (!plan.feasible) continue;
          PlanKey key = MakePlanKey(map, plan, q.objective);
          if (!best || key < *best_key) {
            best = plan;
            best_key = key;
          }
        }
      } while (std::next_permutation(mids.begin(), mids.end()));
      return;
    }
    for (pick[i] = 0; pick[i] < pools[i].size(); ++pick[i]) choose(i + 1);
  };
  choose(0);
  if (!best) throw std::runtime_error("no feasible plan");
  return *best;
}

TEST(SolveOptimalTest, MatchesIndependentSearch) {
  const WorldMap& map = DefaultMap();
  Rng rng(31337);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    QuerySpec q = RandomQuery(rng, map, 2);
    q.departures = {ClockTime::At(static_cast<int>(rng.IntIn(10, 16)), 0)};
    q.fixed_departure = true;
    const SolveResult r = SolveOptimal(map, q);
    if (!r.feasible()) continue;
    const EvaluatedPlan ref = ReferenceSearch(map, q);
    ASSERT_EQ(r.plan.itinerary, ref.itinerary) << "trial " << trial;
    ASSERT_EQ(r.plan.total, ref.total);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(SolveOptimalTest, AgreesWithBruteForceOracle) {
  const WorldMap& map = DefaultMap();
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const QuerySpec q = RandomQuery(rng, map, 3);
    const SolveResult a = SolveOptimal(map, q);
    const SolveResult b = BruteForceOracle(map, q);
    ASSERT_EQ(a.plan, b.plan) << "trial " << trial;
    ASSERT_EQ(a.considered_count, b.considered_count);
  }
}

TEST(SolveOptimalTest, ConsideredCountFormula) {
  const WorldMap& map = DefaultMap();
  QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(12, 0),
                      {Category::kCafe, Category::kGym});
  q.charge_required = true;
  // 3! orders x 9 cafes x 6 gyms x 6 chargers.
  EXPECT_EQ(SolveOptimal(map, q).considered_count, 6 * 9 * 6 * 6);
  q.brand_preferences[Category::kCafe] = *map.poi(map.OfCategory(Category::kCafe)[0]).brand;
  EXPECT_EQ(BruteForceOracle(map, q).considered_count, 6 * 3 * 6 * 6);
}

TEST(SolveOptimalTest, NoStopsGivesDirectTrip) {
  const WorldMap& map = DefaultMap();
  const QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(12, 0));
  const SolveResult r = SolveOptimal(map, q);
  EXPECT_EQ(r.plan.itinerary.stops, (std::vector<PoiId>{PoiId{0}, PoiId{6}}));
  EXPECT_EQ(r.considered_count, 1);
  EXPECT_EQ(r.plan.total.centi(),
            100 * map.matrix().drive(Bucket::k1200, PoiId{0}, PoiId{6}));
}

TEST(SolveOptimalTest, InfeasibleWhenBrandMissing) {
  const WorldMap& map = DefaultMap();
  QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(12, 0), {Category::kCafe});
  q.brand_preferences[Category::kCafe] = "No Such Brand";
  const SolveResult r = SolveOptimal(map, q);
  EXPECT_FALSE(r.feasible());
  EXPECT_EQ(r.considered_count, 0);
  EXPECT_EQ(Tags(r.plan.violations),
            std::vector<std::string>{"missing_category(cafe)"});
}

TEST(SolveOptimalTest, InfeasibleWhenEverythingClosed) {
  const WorldMap& map = DefaultMap();
  const QuerySpec q =
      Fixed(PoiId{0}, PoiId{6}, ClockTime::At(2, 0), {Category::kRestaurant});
  const SolveResult r = SolveOptimal(map, q);
  EXPECT_FALSE(r.feasible());
  EXPECT_EQ(r.plan, BruteForceOracle(map, q).plan);
}

TEST(SolveOptimalTest, CandidateDepartures) {
  const WorldMap& map = DefaultMap();
  QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(0, 0), {Category::kGym});
  q.departures = {ClockTime::At(18, 0), ClockTime::At(12, 0), ClockTime::At(9, 0)};
  q.fixed_departure = false;
  const SolveResult all = SolveOptimal(map, q);
  Minutes best_single = Minutes::Whole(100000);
  for (ClockTime t : q.departures) {
    QuerySpec one = q;
    one.departures = {t};
    one.fixed_departure = true;
    best_single = std::min(best_single, SolveOptimal(map, one).plan.total);
  }
  EXPECT_EQ(all.plan.total, best_single);
  EXPECT_EQ(all.considered_count, 3 * 6);
}

TEST(NearestPoiTest, MatchesScan) {
  const WorldMap& map = DefaultMap();
  for (int o = 0; o < 11; ++o) {
    for (Category c : kDwellCategories) {
      std::optional<PoiId> best;
      for (const Poi& p : map.pois()) {
        if (p.category != c || p.id.v == o) continue;
        if (!best || map.matrix().distance(PoiId{o}, p.id) <
                         map.matrix().distance(PoiId{o}, *best)) {
          best = p.id;
        }
      }
      EXPECT_EQ(NearestPoi(map, PoiId{o}, c), *best);
    }
  }
}

TEST(NearestPoiTest, TieGoesToSmallerId) {
  MapBuilder b;
  const PoiId home = b.Add(Category::kApartment, 5, 5);
  const PoiId left = b.Add(Category::kGym, 4, 5);
  b.Add(Category::kGym, 6, 5);
  EXPECT_EQ(NearestPoi(b.Build(), home, Category::kGym), left);
}

TEST(BestDepartureTest, PicksShortestAndEarliestOnTie) {
  const WorldMap& map = DefaultMap();
  const QuerySpec q = Fixed(PoiId{0}, PoiId{6}, ClockTime::At(0, 0));
  const DepartureChoice c =
      BestDeparture(map, q, {ClockTime::At(9, 0), ClockTime::At(0, 0)});
  EXPECT_EQ(c.departure, ClockTime::At(0, 0));

  MapBuilder b;
  const PoiId home = b.Add(Category::kApartment, 0, 0);
  const PoiId work = b.Add(Category::kCompany, 1, 0);
  b.Drive(home, work, 9);
  const WorldMap flat = b.Build();
  const DepartureChoice tie = BestDeparture(
      flat, Fixed(home, work, ClockTime::At(0, 0)),
      {ClockTime::At(18, 0), ClockTime::At(12, 0), ClockTime::At(9, 0)});
  EXPECT_EQ(tie.departure, ClockTime::At(9, 0));
  EXPECT_THROW(BestDeparture(flat, Fixed(home, work, ClockTime::At(0, 0)), {}),
               ValidationError);
}

TEST(BestDepartureTest, EnginesAgree) {
  const WorldMap& map = DefaultMap();
  Rng rng(5150);
  for (int trial = 0; trial < 15; ++trial) {
    const QuerySpec q = RandomQuery(rng, map, 2);
    const std::vector<ClockTime> cands = {ClockTime::At(0, 0), ClockTime::At(9, 0),
                                          ClockTime::At(12, 0), ClockTime::At(18, 0)};
    const auto a = BestDeparture(map, q, cands, SearchEngine::kBranchAndBound);
    const auto b = BestDeparture(map, q, cands, SearchEngine::kOracle);
    ASSERT_EQ(a.departure, b.departure);
    ASSERT_EQ(a.result.plan, b.result.plan);
  }
}

TEST(BestInsertionTest, MatchesExhaustiveInsertion) {
  const WorldMap& map = DefaultMap();
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const PoiId o = PoiId{static_cast<int>(rng.IntIn(0, 5))};
    const PoiId d = PoiId{static_cast<int>(rng.IntIn(6, 10))};
    const auto chargers = map.OfCategory(Category::kCharging);
    const PoiId mid = rng.Pick(chargers);
    const Category c = rng.Pick(std::vector<Category>{
        Category::kCafe, Category::kGym, Category::kMarket});
    const ClockTime t = ClockTime::At(static_cast<int>(rng.IntIn(10, 16)), 0);
    const Itinerary base{{o, mid, d}, t};
    const QuerySpec q = Fixed(o, d, t);
    const InsertionChoice got = BestInsertion(map, base, c, q);

    std::optional<std::tuple<Minutes, int, PoiId>> best;
    for (int pos = 1; pos <= 2; ++pos) {
      for (PoiId id : map.OfCategory(c)) {
        Itinerary it = base;
        it.stops.insert(it.stops.begin() + pos, id);
        const EvaluatedPlan p = EvaluateWithAbsorption(map, it, q);
        if (!p.feasible) continue;
        const auto key = std::make_tuple(p.total, pos, id);
        if (!best || key < *best) best = key;
      }
    }
    ASSERT_TRUE(best.has_value());
    EXPECT_EQ(got.poi, std::get<2>(*best));
    EXPECT_EQ(got.position, std::get<1>(*best));
    EXPECT_EQ(got.plan.total, std::get<0>(*best));
    EXPECT_EQ(got.considered_count,
              2 * static_cast<std::int64_t>(map.OfCategory(c).size()));
  }
}

TEST(CompareRoutesTest, LabelsShorterRoute) {
  const auto f = MakeAbsorptionMap(5);
  const QuerySpec q = Fixed(f.home, f.work, ClockTime::At(12, 0));
  const Itinerary via_cafe{{f.home, f.cafe, f.work}, ClockTime::At(12, 0)};
  const Itinerary via_charger{{f.home, f.charger, f.work}, ClockTime::At(12, 0)};
  const RouteComparison r = CompareRoutes(f.map, via_charger, via_cafe, q);
  EXPECT_EQ(r.label, 'B');
  EXPECT_FALSE(r.tie);
  EXPECT_EQ(r.total_a, Minutes::Whole(10 + 30 + 12));
  EXPECT_EQ(r.total_b, Minutes::Whole(12 + 6 + 10));
  const RouteComparison same = CompareRoutes(f.map, via_cafe, via_cafe, q);
  EXPECT_EQ(same.label, 'A');
  EXPECT_TRUE(same.tie);
}

}  // namespace
}  // namespace topkit
