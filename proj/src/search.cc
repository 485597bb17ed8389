#include <algorithm>
#include <numeric>

#include "topkit/solver.h"
#include "topkit/timemodel.h"

namespace topkit {

namespace {

struct SearchSpace {
  PoiId origin;
  PoiId destination;
  std::vector<Category> categories;
  std::vector<std::vector<PoiId>> pools;  // parallel to categories
  std::vector<ClockTime> departures;      // ascending, unique

  bool Empty() const {
    return std::any_of(pools.begin(), pools.end(),
                       [](const auto& p) { return p.empty(); });
  }

  std::int64_t Size() const {
    if (Empty()) return 0;
    std::int64_t size = static_cast<std::int64_t>(departures.size());
    for (std::size_t k = 2; k <= categories.size(); ++k) size *= k;
    for (const auto& p : pools) size *= static_cast<std::int64_t>(p.size());
    return size;
  }
};

SearchSpace BuildSpace(const WorldMap& map, const QuerySpec& query) {
  ValidateQuery(map, query);
  SearchSpace space;
  space.origin = query.origin;
  space.destination = query.destination;
  space.categories = query.StopCategories();
  for (Category c : space.categories) {
    std::vector<PoiId> pool;
    auto pref = query.brand_preferences.find(c);
    for (PoiId id : map.OfCategory(c)) {
      if (id == query.origin || id == query.destination) continue;
      if (pref != query.brand_preferences.end() &&
          map.poi(id).brand != pref->second) {
        continue;
      }
      pool.push_back(id);
    }
    space.pools.push_back(std::move(pool));
  }
  space.departures = query.departures;
  std::sort(space.departures.begin(), space.departures.end());
  space.departures.erase(
      std::unique(space.departures.begin(), space.departures.end()),
      space.departures.end());
  return space;
}

// Keeps the best feasible plan under the plan key, and the best infeasible
// attempt (fewest violations first) for reporting when nothing is feasible.
class BestTracker {
 public:
  BestTracker(const WorldMap& map, Objective objective)
      : map_(map), objective_(objective) {}

  void Offer(EvaluatedPlan plan) {
    PlanKey key = MakePlanKey(map_, plan, objective_);
    if (plan.feasible) {
      if (!best_ || key < best_key_) {
        best_key_ = std::move(key);
        best_ = std::move(plan);
      }
      return;
    }
    if (best_) return;
    auto attempt_key = std::make_pair(plan.violations.size(), std::move(key));
    if (!attempt_ || attempt_key < attempt_key_) {
      attempt_key_ = std::move(attempt_key);
      attempt_ = std::move(plan);
    }
  }

  bool HasFeasible() const { return best_.has_value(); }
  std::int64_t BestObjective() const { return std::get<0>(best_key_); }

  EvaluatedPlan Result() && {
    if (best_) return std::move(*best_);
    return std::move(*attempt_);
  }
  bool HasAny() const { return best_ || attempt_; }

 private:
  const WorldMap& map_;
  Objective objective_;
  std::optional<EvaluatedPlan> best_;
  PlanKey best_key_;
  std::optional<EvaluatedPlan> attempt_;
  std::pair<std::size_t, PlanKey> attempt_key_;
};

// Result when some category has no candidate POI: the direct trip, which
// reports the missing categories.
SolveResult NoCandidates(const WorldMap& map, const QuerySpec& query,
                         const SearchSpace& space) {
  Itinerary direct{{space.origin, space.destination}, space.departures.front()};
  EvaluatedPlan plan = EvaluateWithAbsorption(map, direct, query);
  if (plan.violations.empty()) {
    // Only reachable when a brand filter emptied a pool.
    for (std::size_t i = 0; i < space.categories.size(); ++i) {
      if (space.pools[i].empty()) {
        plan.violations.push_back({ViolationKind::kMissingCategory,
                                   space.categories[i], std::nullopt});
      }
    }
  }
  plan.feasible = false;
  return {std::move(plan), 0};
}

class BranchAndBound {
 public:
  BranchAndBound(const WorldMap& map, const QuerySpec& query,
                 const SearchSpace& space, BestTracker& tracker)
      : map_(map),
        query_(query),
        space_(space),
        tracker_(tracker),
        prune_(query.objective == Objective::kTotalTime) {
    for (std::size_t i = 0; i < space.categories.size(); ++i) {
      if (space.categories[i] == Category::kCharging) charging_index_ = i;
    }
  }

  void Run(ClockTime departure) {
    departure_ = departure;
    start_ = departure.AsInstant();
    const Poi& origin = map_.poi(space_.origin);
    prefix_ = {space_.origin};
    leave_ = {start_ + DwellMinutes(origin, departure,
                                    query_.OverrideFor(origin.category))};
    Expand((1u << space_.categories.size()) - 1);
  }

 private:
  struct Child {
    Minutes arrive;
    PoiId poi;
    std::size_t category;
    Minutes leave;
  };

  void Expand(std::uint32_t remaining) {
    if (remaining == 0) {
      Itinerary it{prefix_, departure_};
      it.stops.push_back(space_.destination);
      tracker_.Offer(EvaluateWithAbsorption(map_, it, query_));
      return;
    }
    const PoiId here = prefix_.back();
    const Minutes now = leave_.back();
    const ClockTime clock = ClockTime::OfInstant(now);
    std::vector<Child> children;
    for (std::size_t i = 0; i < space_.categories.size(); ++i) {
      if (!(remaining & (1u << i))) continue;
      for (PoiId id : space_.pools[i]) {
        const Minutes arrive =
            now + Minutes::Whole(DriveMinutes(map_, here, id, clock));
        const Poi& p = map_.poi(id);
        const Minutes stay = DwellMinutes(p, ClockTime::OfInstant(arrive),
                                          query_.OverrideFor(p.category));
        children.push_back({arrive, id, i, arrive + stay});
      }
    }
    // Nearest first so a good incumbent appears early.
    std::sort(children.begin(), children.end(),
              [](const Child& a, const Child& b) {
                return std::tie(a.arrive, a.poi) < std::tie(b.arrive, b.poi);
              });
    for (const Child& c : children) {
      const std::uint32_t rest = remaining & ~(1u << c.category);
      prefix_.push_back(c.poi);
      leave_.push_back(c.leave);
      if (!Prunable(rest)) Expand(rest);
      prefix_.pop_back();
      leave_.pop_back();
    }
  }

  // Instant before which every completion of the prefix, absorbed or not,
  // follows the same timeline. Absorbing an errand q only changes the trip
  // from the stop before q onward, and never shortens the charging stop.
  Minutes SafeInstant(std::uint32_t remaining) const {
    const std::size_t m = prefix_.size() - 1;
    if (!charging_index_) return leave_[m];
    const bool charging_left = remaining & (1u << *charging_index_);
    auto is_charging = [&](std::size_t k) {
      return k >= 1 && map_.poi(prefix_[k]).category == Category::kCharging;
    };
    for (std::size_t i = 1; i <= m; ++i) {
      if (is_charging(i)) continue;
      const bool absorbable = is_charging(i - 1) ||
                              (i < m && is_charging(i + 1)) ||
                              (i == m && charging_left);
      if (absorbable) return leave_[i - 1];
    }
    return leave_[m];
  }

  bool Prunable(std::uint32_t remaining) const {
    if (!prune_ || !tracker_.HasFeasible()) return false;
    const Minutes bound = SafeInstant(remaining) - start_;
    return bound.centi() > tracker_.BestObjective();
  }

  const WorldMap& map_;
  const QuerySpec& query_;
  const SearchSpace& space_;
  BestTracker& tracker_;
  const bool prune_;
  std::optional<std::size_t> charging_index_;

  ClockTime departure_;
  Minutes start_;
  std::vector<PoiId> prefix_;
  std::vector<Minutes> leave_;  // departure instant from each prefix stop
};

}  // namespace

SolveResult SolveOptimal(const WorldMap& map, const QuerySpec& query) {
  const SearchSpace space = BuildSpace(map, query);
  if (space.Empty()) return NoCandidates(map, query, space);
  BestTracker tracker(map, query.objective);
  BranchAndBound search(map, query, space, tracker);
  for (ClockTime departure : space.departures) search.Run(departure);
  return {std::move(tracker).Result(), space.Size()};
}

SolveResult BruteForceOracle(const WorldMap& map, const QuerySpec& query) {
  const SearchSpace space = BuildSpace(map, query);
  if (space.Empty()) return NoCandidates(map, query, space);
  BestTracker tracker(map, query.objective);
  const std::size_t k = space.categories.size();
  std::int64_t count = 0;
  for (ClockTime departure : space.departures) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<std::size_t> choice(k, 0);
      while (true) {
        Itinerary it{{space.origin}, departure};
        for (std::size_t pos = 0; pos < k; ++pos) {
          it.stops.push_back(space.pools[order[pos]][choice[pos]]);
        }
        it.stops.push_back(space.destination);
        tracker.Offer(EvaluateWithAbsorption(map, it, query));
        ++count;
        // Odometer over the POI choices.
        bool advanced = false;
        for (std::size_t pos = k; pos-- > 0;) {
          if (++choice[pos] < space.pools[order[pos]].size()) {
            advanced = true;
            break;
          }
          choice[pos] = 0;
        }
        if (!advanced) break;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return {std::move(tracker).Result(), count};
}

PoiId NearestPoi(const WorldMap& map, PoiId origin, Category category) {
  map.CheckId(origin);
  std::optional<PoiId> best;
  double best_km = 0.0;
  for (PoiId id : map.OfCategory(category)) {
    if (id == origin) continue;
    const double km = map.matrix().distance(origin, id);
    if (!best || km < best_km) {
      best = id;
      best_km = km;
    }
  }
  if (!best) {
    throw LookupError("no POI of category '" +
                      std::string(CategorySlug(category)) + "' besides the origin");
  }
  return *best;
}

DepartureChoice BestDeparture(const WorldMap& map, const QuerySpec& query,
                              const std::vector<ClockTime>& candidates,
                              SearchEngine engine) {
  if (candidates.empty()) {
    throw ValidationError("best departure needs at least one candidate");
  }
  std::vector<ClockTime> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::optional<DepartureChoice> best;
  std::int64_t considered = 0;
  auto rank = [](const SolveResult& r) {
    return std::make_tuple(!r.feasible(), r.plan.violations.size(),
                           r.plan.total);
  };
  for (ClockTime t : sorted) {
    QuerySpec q = query;
    q.departures = {t};
    q.fixed_departure = true;
    SolveResult r = engine == SearchEngine::kOracle ? BruteForceOracle(map, q)
                                                    : SolveOptimal(map, q);
    considered += r.considered_count;
    if (!best || rank(r) < rank(best->result)) {
      best = DepartureChoice{t, std::move(r)};
    }
  }
  best->result.considered_count = considered;
  return std::move(*best);
}

InsertionChoice BestInsertion(const WorldMap& map, const Itinerary& base,
                              Category category, const QuerySpec& query) {
  EvaluatePlan(map, base, query);  // validates the base itinerary
  auto pref = query.brand_preferences.find(category);
  std::optional<InsertionChoice> best;
  std::optional<InsertionChoice> attempt;
  std::int64_t considered = 0;
  auto rank = [](const InsertionChoice& c) {
    return std::make_tuple(c.plan.total, c.position, c.poi);
  };
  for (std::size_t pos = 1; pos < base.stops.size(); ++pos) {
    for (PoiId id : map.OfCategory(category)) {
      if (std::find(base.stops.begin(), base.stops.end(), id) !=
          base.stops.end()) {
        continue;
      }
      if (pref != query.brand_preferences.end() &&
          map.poi(id).brand != pref->second) {
        continue;
      }
      Itinerary it = base;
      it.stops.insert(it.stops.begin() + static_cast<std::ptrdiff_t>(pos), id);
      InsertionChoice c{id, static_cast<int>(pos),
                        EvaluateWithAbsorption(map, it, query), 0};
      ++considered;
      auto& slot = c.feasible() ? best : attempt;
      if (!slot || rank(c) < rank(*slot)) slot = std::move(c);
    }
  }
  if (!best && !attempt) {
    throw LookupError("no POI of category '" +
                      std::string(CategorySlug(category)) +
                      "' available for insertion");
  }
  InsertionChoice out = best ? std::move(*best) : std::move(*attempt);
  out.considered_count = considered;
  return out;
}

RouteComparison CompareRoutes(const WorldMap& map, const Itinerary& a,
                              const Itinerary& b, const QuerySpec& query) {
  RouteComparison out;
  out.total_a = EvaluatePlan(map, a, query).total;
  out.total_b = EvaluatePlan(map, b, query).total;
  out.tie = out.total_a == out.total_b;
  out.label = out.total_b < out.total_a ? 'B' : 'A';
  return out;
}

}  // namespace topkit
