#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "topkit/core.h"
#include "topkit/worldmodel.h"

namespace topkit {

enum class Objective : std::uint8_t { kTotalTime, kTotalPrice, kTotalDwell };

std::string_view ObjectiveSlug(Objective o);
Objective ParseObjective(std::string_view slug);  // throws ParseError

// Structured planning request.
struct QuerySpec {
  PoiId origin;
  PoiId destination;
  std::vector<Category> required_categories;
  std::map<Category, std::string> brand_preferences;
  std::map<Category, Minutes> dwell_overrides;
  // A single entry with fixed_departure set is a fixed departure; otherwise
  // the search optimizes over every candidate.
  std::vector<ClockTime> departures = {ClockTime::At(9, 0)};
  bool fixed_departure = true;
  Objective objective = Objective::kTotalTime;
  // Shorthand for requiring a charging stop.
  bool charge_required = false;

  std::optional<Minutes> OverrideFor(Category c) const;
  // Required categories plus charging when charge_required asks for it.
  std::vector<Category> StopCategories() const;

  bool operator==(const QuerySpec&) const = default;
};

// Throws ValidationError naming the first broken invariant.
void ValidateQuery(const WorldMap& map, const QuerySpec& query);

inline constexpr int kMaxRequiredCategories = 4;

struct Itinerary {
  std::vector<PoiId> stops;
  ClockTime departure;

  bool operator==(const Itinerary&) const = default;
};

enum class TravelMode : std::uint8_t { kDrive, kWalk };

// One movement. `depart`/`arrive` are instants in minutes since midnight of
// the departure day (they may pass 1440). `dwell_min` is the stay at `to`
// after arrival; for a charging stop with an absorbed errand it is the
// combined stay max(charge, walk + errand + walk).
struct Leg {
  PoiId from;
  PoiId to;
  TravelMode mode = TravelMode::kDrive;
  Minutes depart;
  int travel_min = 0;
  Minutes arrive;
  Minutes dwell_min;
  bool absorbed_into_charge = false;

  bool operator==(const Leg&) const = default;
};

enum class ViolationKind : std::uint8_t {
  kMissingCategory,
  kClosedAtArrival,
  kDwellPastClose,
  kBrandMismatch,
  kMissingCharge,
};

struct Violation {
  ViolationKind kind;
  std::optional<Category> category;
  std::optional<PoiId> poi;

  // "missing_category(gym)", "closed_at_arrival(12)", ...
  std::string Tag() const;
  static Violation Parse(std::string_view tag);

  bool operator==(const Violation&) const = default;
};

struct EvaluatedPlan {
  Itinerary itinerary;
  Minutes origin_dwell;
  std::vector<Leg> legs;
  Minutes total;
  bool feasible = true;
  std::vector<Violation> violations;

  // Intermediate stop visited on foot during a charge, if any.
  std::vector<PoiId> AbsorbedStops() const;

  bool operator==(const EvaluatedPlan&) const = default;
};

// Forward simulation of the trip cost: every leg drives with the bucket of
// its own departure instant; each stop except the destination adds its dwell
// at arrival. No absorption is applied. Feasibility fields are filled in.
EvaluatedPlan EvaluatePlan(const WorldMap& map, const Itinerary& itinerary,
                           const QuerySpec& query);

std::vector<Violation> CheckFeasibility(const WorldMap& map,
                                        const EvaluatedPlan& plan,
                                        const QuerySpec& query);
std::vector<Violation> CheckFeasibility(const WorldMap& map,
                                        const Itinerary& itinerary,
                                        const QuerySpec& query);

// Lets the traveller walk from a charging stop to an adjacent errand and
// back while the vehicle charges. An errand q next to charging stop ch is
// eligible when 2*walk + dwell(q) <= charge dwell, the resulting total is
// strictly smaller, and no new opening-hours violation appears. At most one
// errand per charging stop; the smallest total wins, then the smaller id.
EvaluatedPlan ApplyChargeAbsorption(const WorldMap& map,
                                    const EvaluatedPlan& plan,
                                    const QuerySpec& query);

// EvaluatePlan followed by ApplyChargeAbsorption.
EvaluatedPlan EvaluateWithAbsorption(const WorldMap& map,
                                     const Itinerary& itinerary,
                                     const QuerySpec& query);

// Value minimized by the objective, in hundredths (price levels scaled by
// 100 so all objectives share a unit).
std::int64_t ObjectiveValue(const WorldMap& map, const EvaluatedPlan& plan,
                            Objective objective);

// Total order used for every optimum: objective, then total minutes, then
// earlier departure, then lexicographically smaller stop ids.
using PlanKey =
    std::tuple<std::int64_t, std::int64_t, int, std::vector<std::int32_t>>;
PlanKey MakePlanKey(const WorldMap& map, const EvaluatedPlan& plan,
                    Objective objective);

struct SolveResult {
  EvaluatedPlan plan;
  // Complete candidate plans in the search space.
  std::int64_t considered_count = 0;

  bool feasible() const { return plan.feasible; }
};

// Exact optimum by depth-first branch and bound. Equal to BruteForceOracle.
SolveResult SolveOptimal(const WorldMap& map, const QuerySpec& query);

// Plain enumeration: every category order, every POI choice, every
// departure. Reference for tests and ground-truth verification.
SolveResult BruteForceOracle(const WorldMap& map, const QuerySpec& query);

// Closest POI of `category` by distance, excluding `origin` itself; ties go
// to the smaller id.
PoiId NearestPoi(const WorldMap& map, PoiId origin, Category category);

struct DepartureChoice {
  ClockTime departure;
  SolveResult result;
};

enum class SearchEngine : std::uint8_t { kBranchAndBound, kOracle };

// Optimal plan at each candidate; the shortest total wins, ties go to the
// earliest clock value.
DepartureChoice BestDeparture(
    const WorldMap& map, const QuerySpec& query,
    const std::vector<ClockTime>& candidates,
    SearchEngine engine = SearchEngine::kBranchAndBound);

struct InsertionChoice {
  PoiId poi;
  int position = 0;  // index of the new stop in the resulting itinerary
  EvaluatedPlan plan;
  std::int64_t considered_count = 0;

  bool feasible() const { return plan.feasible; }
};

// Best (POI, slot) to add a stop of `category` between existing stops.
InsertionChoice BestInsertion(const WorldMap& map, const Itinerary& base,
                              Category category, const QuerySpec& query);

struct RouteComparison {
  char label = 'A';
  bool tie = false;
  Minutes total_a;
  Minutes total_b;
};

RouteComparison CompareRoutes(const WorldMap& map, const Itinerary& a,
                              const Itinerary& b, const QuerySpec& query);

}  // namespace topkit
