#include <algorithm>
#include <set>

#include "topkit/solver.h"
#include "topkit/timemodel.h"

namespace topkit {

std::string_view ObjectiveSlug(Objective o) {
  switch (o) {
    case Objective::kTotalTime: return "total_time";
    case Objective::kTotalPrice: return "total_price";
    case Objective::kTotalDwell: return "total_dwell";
  }
  return "unknown";
}

Objective ParseObjective(std::string_view slug) {
  for (Objective o : {Objective::kTotalTime, Objective::kTotalPrice,
                      Objective::kTotalDwell}) {
    if (ObjectiveSlug(o) == slug) return o;
  }
  throw ParseError("unknown objective '" + std::string(slug) + "'");
}

std::optional<Minutes> QuerySpec::OverrideFor(Category c) const {
  auto it = dwell_overrides.find(c);
  if (it == dwell_overrides.end()) return std::nullopt;
  return it->second;
}

std::vector<Category> QuerySpec::StopCategories() const {
  std::vector<Category> out = required_categories;
  if (charge_required &&
      std::find(out.begin(), out.end(), Category::kCharging) == out.end()) {
    out.push_back(Category::kCharging);
  }
  return out;
}

void ValidateQuery(const WorldMap& map, const QuerySpec& query) {
  if (!map.Contains(query.origin)) {
    throw ValidationError("query.origin: unknown POI id " +
                          std::to_string(query.origin.v));
  }
  if (!map.Contains(query.destination)) {
    throw ValidationError("query.destination: unknown POI id " +
                          std::to_string(query.destination.v));
  }
  if (query.origin == query.destination) {
    throw ValidationError("query: origin and destination must differ");
  }
  const auto cats = query.StopCategories();
  if (cats.size() > static_cast<std::size_t>(kMaxRequiredCategories)) {
    throw ValidationError("query.required_categories: at most " +
                          std::to_string(kMaxRequiredCategories) +
                          " categories supported");
  }
  std::set<Category> seen;
  for (Category c : query.required_categories) {
    if (!seen.insert(c).second) {
      throw ValidationError("query.required_categories: duplicate '" +
                            std::string(CategorySlug(c)) + "'");
    }
  }
  for (std::size_t i = 0; i < cats.size(); ++i) {
    for (std::size_t j = i + 1; j < cats.size(); ++j) {
      if (map.Excluded(CategorySlug(cats[i]), CategorySlug(cats[j]))) {
        throw ValidationError(
            "query.required_categories: '" + std::string(CategorySlug(cats[i])) +
            "' and '" + std::string(CategorySlug(cats[j])) +
            "' may not appear together");
      }
    }
  }
  for (const auto& [c, brand] : query.brand_preferences) {
    if (std::find(cats.begin(), cats.end(), c) == cats.end()) {
      throw ValidationError("query.brand_preferences: '" +
                            std::string(CategorySlug(c)) +
                            "' is not a required category");
    }
  }
  for (const auto& [c, minutes] : query.dwell_overrides) {
    if (minutes < Minutes()) {
      throw ValidationError("query.dwell_overrides: negative minutes for '" +
                            std::string(CategorySlug(c)) + "'");
    }
  }
  if (query.departures.empty()) {
    throw ValidationError("query.departure: no departure time given");
  }
  if (query.fixed_departure && query.departures.size() != 1) {
    throw ValidationError("query.departure: a fixed departure has one time");
  }
}

std::string Violation::Tag() const {
  switch (kind) {
    case ViolationKind::kMissingCategory:
      return "missing_category(" + std::string(CategorySlug(*category)) + ")";
    case ViolationKind::kClosedAtArrival:
      return "closed_at_arrival(" + std::to_string(poi->v) + ")";
    case ViolationKind::kDwellPastClose:
      return "dwell_past_close(" + std::to_string(poi->v) + ")";
    case ViolationKind::kBrandMismatch:
      return "brand_mismatch(" + std::to_string(poi->v) + ")";
    case ViolationKind::kMissingCharge:
      return "missing_charge";
  }
  return "unknown";
}

Violation Violation::Parse(std::string_view tag) {
  if (tag == "missing_charge") {
    return {ViolationKind::kMissingCharge, std::nullopt, std::nullopt};
  }
  const auto open = tag.find('(');
  if (open == std::string_view::npos || tag.back() != ')') {
    throw ParseError("malformed violation tag '" + std::string(tag) + "'");
  }
  const std::string_view head = tag.substr(0, open);
  const std::string arg(tag.substr(open + 1, tag.size() - open - 2));
  if (head == "missing_category") {
    return {ViolationKind::kMissingCategory, ParseCategory(arg), std::nullopt};
  }
  int id = 0;
  try {
    std::size_t used = 0;
    id = std::stoi(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw ParseError("malformed violation tag '" + std::string(tag) + "'");
  }
  if (head == "closed_at_arrival") {
    return {ViolationKind::kClosedAtArrival, std::nullopt, PoiId{id}};
  }
  if (head == "dwell_past_close") {
    return {ViolationKind::kDwellPastClose, std::nullopt, PoiId{id}};
  }
  if (head == "brand_mismatch") {
    return {ViolationKind::kBrandMismatch, std::nullopt, PoiId{id}};
  }
  throw ParseError("unknown violation tag '" + std::string(tag) + "'");
}

std::vector<PoiId> EvaluatedPlan::AbsorbedStops() const {
  // Absorbed walks come in out-and-back pairs; the outbound leg ends at the
  // errand.
  std::vector<PoiId> out;
  bool outbound = true;
  for (const Leg& leg : legs) {
    if (!leg.absorbed_into_charge) continue;
    if (outbound) out.push_back(leg.to);
    outbound = !outbound;
  }
  return out;
}

namespace {

struct ChargeCheck {
  Minutes charge;
  int walk = 0;
  Minutes errand_dwell;
};

using AbsorptionPairs = std::vector<std::pair<std::size_t, std::size_t>>;

void CheckStops(const WorldMap& map, const Itinerary& itinerary) {
  if (itinerary.stops.size() < 2) {
    throw ValidationError("itinerary needs at least an origin and a destination");
  }
  std::set<PoiId> seen;
  for (PoiId id : itinerary.stops) {
    map.CheckId(id);
    if (!seen.insert(id).second) {
      throw ValidationError("itinerary repeats POI " + std::to_string(id.v));
    }
  }
}

// Forward simulation; `pairs` lists (charging index, errand index) visits
// done on foot during the charge.
EvaluatedPlan Simulate(const WorldMap& map, const Itinerary& itinerary,
                       const QuerySpec& query, const AbsorptionPairs& pairs,
                       std::vector<std::optional<ChargeCheck>>* checks) {
  const auto& stops = itinerary.stops;
  const std::size_t n = stops.size();
  std::vector<std::optional<std::size_t>> errand_of(n);
  std::vector<bool> skipped(n, false);
  for (const auto& [ch, q] : pairs) {
    errand_of[ch] = q;
    skipped[q] = true;
  }
  if (checks) checks->assign(n, std::nullopt);

  EvaluatedPlan plan;
  plan.itinerary = itinerary;
  const Minutes start = itinerary.departure.AsInstant();
  const Poi& origin = map.poi(stops.front());
  plan.origin_dwell = DwellMinutes(origin, ClockTime::OfInstant(start),
                                   query.OverrideFor(origin.category));
  Minutes t = start + plan.origin_dwell;
  std::size_t current = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (skipped[k]) continue;
    Leg leg;
    leg.from = stops[current];
    leg.to = stops[k];
    leg.mode = TravelMode::kDrive;
    leg.depart = t;
    leg.travel_min =
        DriveMinutes(map, leg.from, leg.to, ClockTime::OfInstant(t));
    leg.arrive = t + Minutes::Whole(leg.travel_min);
    current = k;
    if (k + 1 == n) {
      plan.legs.push_back(leg);
      t = leg.arrive;
      break;
    }
    const Poi& stop = map.poi(leg.to);
    const Minutes stay = DwellMinutes(stop, ClockTime::OfInstant(leg.arrive),
                                      query.OverrideFor(stop.category));
    if (!errand_of[k]) {
      leg.dwell_min = stay;
      plan.legs.push_back(leg);
      t = leg.arrive + stay;
      continue;
    }
    const PoiId errand_id = stops[*errand_of[k]];
    const Poi& errand = map.poi(errand_id);
    const int walk = map.matrix().walk(leg.to, errand_id);
    const Minutes at_errand = leg.arrive + Minutes::Whole(walk);
    const Minutes errand_dwell =
        DwellMinutes(errand, ClockTime::OfInstant(at_errand),
                     query.OverrideFor(errand.category));
    const Minutes loop = Minutes::Whole(2 * walk) + errand_dwell;
    if (checks) (*checks)[k] = ChargeCheck{stay, walk, errand_dwell};
    leg.dwell_min = std::max(stay, loop);
    plan.legs.push_back(leg);

    Leg out{leg.to,     errand_id,    TravelMode::kWalk, leg.arrive,
            walk,       at_errand,    errand_dwell,      true};
    Leg back{errand_id, leg.to, TravelMode::kWalk, at_errand + errand_dwell,
             walk,      at_errand + errand_dwell + Minutes::Whole(walk),
             Minutes(), true};
    plan.legs.push_back(out);
    plan.legs.push_back(back);
    t = leg.arrive + leg.dwell_min;
  }
  plan.total = t - start;
  return plan;
}

std::vector<Violation> HoursViolations(const WorldMap& map,
                                       const EvaluatedPlan& plan) {
  std::vector<Violation> out;
  bool outbound = true;
  for (const Leg& leg : plan.legs) {
    if (leg.absorbed_into_charge) {
      const bool is_return = !outbound;
      outbound = !outbound;
      if (is_return) continue;
    }
    const Poi& p = map.poi(leg.to);
    if (p.AlwaysOpen()) continue;
    constexpr std::int64_t kDay = std::int64_t{kMinutesPerDay} * 100;
    const std::int64_t tod = ((leg.arrive.centi() % kDay) + kDay) % kDay;
    const std::int64_t open = std::int64_t{p.open_minute} * 100;
    const std::int64_t close = std::int64_t{p.close_minute} * 100;
    if (tod < open || tod >= close) {
      out.push_back({ViolationKind::kClosedAtArrival, std::nullopt, p.id});
    } else if (tod + leg.dwell_min.centi() > close) {
      out.push_back({ViolationKind::kDwellPastClose, std::nullopt, p.id});
    }
  }
  return out;
}

void Finalize(const WorldMap& map, const QuerySpec& query,
              EvaluatedPlan& plan) {
  plan.violations = CheckFeasibility(map, plan, query);
  plan.feasible = plan.violations.empty();
}

}  // namespace

EvaluatedPlan EvaluatePlan(const WorldMap& map, const Itinerary& itinerary,
                           const QuerySpec& query) {
  CheckStops(map, itinerary);
  EvaluatedPlan plan = Simulate(map, itinerary, query, {}, nullptr);
  Finalize(map, query, plan);
  return plan;
}

std::vector<Violation> CheckFeasibility(const WorldMap& map,
                                        const EvaluatedPlan& plan,
                                        const QuerySpec& query) {
  std::vector<Violation> out;
  const auto& stops = plan.itinerary.stops;
  auto visits = [&](Category c) {
    return std::any_of(stops.begin(), stops.end(), [&](PoiId id) {
      return map.poi(id).category == c;
    });
  };
  for (Category c : query.required_categories) {
    if (!visits(c)) {
      out.push_back({ViolationKind::kMissingCategory, c, std::nullopt});
    }
  }
  if (query.charge_required && !visits(Category::kCharging)) {
    out.push_back({ViolationKind::kMissingCharge, std::nullopt, std::nullopt});
  }
  for (Violation& v : HoursViolations(map, plan)) out.push_back(v);
  for (PoiId id : stops) {
    const Poi& p = map.poi(id);
    auto pref = query.brand_preferences.find(p.category);
    if (pref != query.brand_preferences.end() && p.brand != pref->second) {
      out.push_back({ViolationKind::kBrandMismatch, std::nullopt, id});
    }
  }
  return out;
}

std::vector<Violation> CheckFeasibility(const WorldMap& map,
                                        const Itinerary& itinerary,
                                        const QuerySpec& query) {
  return EvaluatePlan(map, itinerary, query).violations;
}

EvaluatedPlan ApplyChargeAbsorption(const WorldMap& map,
                                    const EvaluatedPlan& plan,
                                    const QuerySpec& query) {
  const auto& stops = plan.itinerary.stops;
  const std::size_t n = stops.size();
  if (!plan.AbsorbedStops().empty() || n < 4) return plan;

  EvaluatedPlan current = plan;
  std::size_t current_hours = HoursViolations(map, current).size();
  AbsorptionPairs pairs;
  std::vector<bool> used(n, false);
  bool changed = false;

  for (std::size_t ch = 1; ch + 1 < n; ++ch) {
    if (map.poi(stops[ch]).category != Category::kCharging || used[ch]) {
      continue;
    }
    std::optional<EvaluatedPlan> best;
    std::optional<std::size_t> best_q;
    for (std::size_t q : {ch - 1, ch + 1}) {
      if (q < 1 || q + 1 >= n || used[q]) continue;
      if (map.poi(stops[q]).category == Category::kCharging) continue;
      AbsorptionPairs trial_pairs = pairs;
      trial_pairs.emplace_back(ch, q);
      std::vector<std::optional<ChargeCheck>> checks;
      EvaluatedPlan trial =
          Simulate(map, plan.itinerary, query, trial_pairs, &checks);
      const ChargeCheck& check = *checks[ch];
      const bool fits = Minutes::Whole(2 * check.walk) + check.errand_dwell <=
                        check.charge;
      if (!fits || !(trial.total < current.total)) continue;
      if (HoursViolations(map, trial).size() > current_hours) continue;
      if (!best || trial.total < best->total ||
          (trial.total == best->total && stops[q] < stops[*best_q])) {
        best = std::move(trial);
        best_q = q;
      }
    }
    if (best) {
      current = std::move(*best);
      current_hours = HoursViolations(map, current).size();
      pairs.emplace_back(ch, *best_q);
      used[ch] = true;
      used[*best_q] = true;
      changed = true;
    }
  }
  if (changed) Finalize(map, query, current);
  return current;
}

EvaluatedPlan EvaluateWithAbsorption(const WorldMap& map,
                                     const Itinerary& itinerary,
                                     const QuerySpec& query) {
  return ApplyChargeAbsorption(map, EvaluatePlan(map, itinerary, query), query);
}

std::int64_t ObjectiveValue(const WorldMap& map, const EvaluatedPlan& plan,
                            Objective objective) {
  switch (objective) {
    case Objective::kTotalTime:
      return plan.total.centi();
    case Objective::kTotalPrice: {
      std::int64_t sum = 0;
      const auto& stops = plan.itinerary.stops;
      for (std::size_t k = 1; k + 1 < stops.size(); ++k) {
        sum += map.poi(stops[k]).price_level;
      }
      return sum * 100;
    }
    case Objective::kTotalDwell: {
      Minutes sum = plan.origin_dwell;
      for (const Leg& leg : plan.legs) {
        if (!leg.absorbed_into_charge) sum += leg.dwell_min;
      }
      return sum.centi();
    }
  }
  return 0;
}

PlanKey MakePlanKey(const WorldMap& map, const EvaluatedPlan& plan,
                    Objective objective) {
  std::vector<std::int32_t> ids;
  ids.reserve(plan.itinerary.stops.size());
  for (PoiId id : plan.itinerary.stops) ids.push_back(id.v);
  return {ObjectiveValue(map, plan, objective), plan.total.centi(),
          plan.itinerary.departure.minute_of_day(), std::move(ids)};
}

}  // namespace topkit
