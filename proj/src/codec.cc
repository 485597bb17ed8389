#include "topkit/codec.h"

#include "json_util.h"

namespace topkit {

using internal::ArrayOf;
using internal::As;
using internal::Field;
using internal::FieldAs;
using internal::OptionalField;

namespace {

constexpr std::size_t kAny = static_cast<std::size_t>(-1);

std::string Sub(std::string_view ctx, std::string_view key) {
  return std::string(ctx) + "." + std::string(key);
}

ClockTime ClockFromJson(const Json& j, const std::string& ctx) {
  try {
    return ClockTime::Parse(As<std::string>(j, ctx));
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

Category CategoryFromJson(const Json& j, const std::string& ctx) {
  const auto slug = As<std::string>(j, ctx);
  auto c = CategoryFromSlug(slug);
  if (!c) throw ParseError(ctx + ": unknown category '" + slug + "'");
  return *c;
}

}  // namespace

Json MinutesToJson(Minutes m) { return m.value(); }

Minutes MinutesFromJson(const Json& j, std::string_view ctx) {
  if (!j.is_number()) {
    throw ParseError(std::string(ctx) + ": expected a number of minutes");
  }
  return Minutes::FromDouble(j.get<double>());
}

PoiId PoiRefFromJson(const WorldMap& map, const Json& j, std::string_view ctx) {
  if (j.is_number_integer()) {
    PoiId id{j.get<std::int32_t>()};
    if (!map.Contains(id)) {
      throw ValidationError(std::string(ctx) + ": unknown POI id " +
                            std::to_string(id.v));
    }
    return id;
  }
  if (j.is_string()) {
    auto id = map.FindByName(j.get<std::string>());
    if (!id) {
      throw ValidationError(std::string(ctx) + ": unknown POI '" +
                            j.get<std::string>() + "'");
    }
    return *id;
  }
  throw ParseError(std::string(ctx) + ": expected a POI id or name");
}

Json QueryToJson(const QuerySpec& query) {
  Json j;
  j["origin"] = query.origin.v;
  j["destination"] = query.destination.v;
  Json cats = Json::array();
  for (Category c : query.required_categories) cats.push_back(CategorySlug(c));
  j["required_categories"] = std::move(cats);
  Json brands = Json::object();
  for (const auto& [c, brand] : query.brand_preferences) {
    brands[std::string(CategorySlug(c))] = brand;
  }
  j["brand_preferences"] = std::move(brands);
  Json overrides = Json::object();
  for (const auto& [c, minutes] : query.dwell_overrides) {
    overrides[std::string(CategorySlug(c))] = MinutesToJson(minutes);
  }
  j["dwell_overrides"] = std::move(overrides);
  if (query.fixed_departure) {
    j["departure"] = query.departures.front().ToString();
  } else {
    Json times = Json::array();
    for (ClockTime t : query.departures) times.push_back(t.ToString());
    j["departure"] = std::move(times);
  }
  j["objective"] = ObjectiveSlug(query.objective);
  j["charge_required"] = query.charge_required;
  return j;
}

QuerySpec QueryFromJson(const WorldMap& map, const Json& j,
                        std::string_view ctx) {
  QuerySpec q;
  q.origin = PoiRefFromJson(map, Field(j, "origin", ctx), Sub(ctx, "origin"));
  q.destination = PoiRefFromJson(map, Field(j, "destination", ctx),
                                 Sub(ctx, "destination"));
  if (const Json* cats = OptionalField(j, "required_categories")) {
    const std::string cctx = Sub(ctx, "required_categories");
    ArrayOf(*cats, kAny, cctx);
    for (std::size_t i = 0; i < cats->size(); ++i) {
      q.required_categories.push_back(CategoryFromJson(
          (*cats)[i], cctx + "[" + std::to_string(i) + "]"));
    }
  }
  if (const Json* brands = OptionalField(j, "brand_preferences")) {
    if (!brands->is_object()) {
      throw ParseError(Sub(ctx, "brand_preferences") + ": expected an object");
    }
    for (const auto& [slug, brand] : brands->items()) {
      const std::string bctx = Sub(Sub(ctx, "brand_preferences"), slug);
      auto c = CategoryFromSlug(slug);
      if (!c) throw ParseError(bctx + ": unknown category");
      q.brand_preferences[*c] = As<std::string>(brand, bctx);
    }
  }
  if (const Json* overrides = OptionalField(j, "dwell_overrides")) {
    if (!overrides->is_object()) {
      throw ParseError(Sub(ctx, "dwell_overrides") + ": expected an object");
    }
    for (const auto& [slug, minutes] : overrides->items()) {
      const std::string octx = Sub(Sub(ctx, "dwell_overrides"), slug);
      auto c = CategoryFromSlug(slug);
      if (!c) throw ParseError(octx + ": unknown category");
      q.dwell_overrides[*c] = MinutesFromJson(minutes, octx);
    }
  }
  const std::string dctx = Sub(ctx, "departure");
  const Json& dep = Field(j, "departure", ctx);
  if (dep.is_array()) {
    q.departures.clear();
    for (std::size_t i = 0; i < dep.size(); ++i) {
      q.departures.push_back(
          ClockFromJson(dep[i], dctx + "[" + std::to_string(i) + "]"));
    }
    q.fixed_departure = false;
  } else {
    q.departures = {ClockFromJson(dep, dctx)};
    q.fixed_departure = true;
  }
  if (const Json* obj = OptionalField(j, "objective")) {
    try {
      q.objective = ParseObjective(As<std::string>(*obj, Sub(ctx, "objective")));
    } catch (const ParseError& e) {
      throw ParseError(Sub(ctx, "objective") + ": " + e.what());
    }
  }
  if (const Json* charge = OptionalField(j, "charge_required")) {
    q.charge_required = As<bool>(*charge, Sub(ctx, "charge_required"));
  }
  try {
    ValidateQuery(map, q);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(ctx) + ": " + e.what());
  }
  return q;
}

Json ItineraryToJson(const Itinerary& itinerary) {
  Json stops = Json::array();
  for (PoiId id : itinerary.stops) stops.push_back(id.v);
  Json j;
  j["stops"] = std::move(stops);
  j["departure"] = itinerary.departure.ToString();
  return j;
}

Itinerary ItineraryFromJson(const WorldMap& map, const Json& j,
                            std::string_view ctx) {
  Itinerary it;
  const std::string sctx = Sub(ctx, "stops");
  const Json& stops = ArrayOf(Field(j, "stops", ctx), kAny, sctx);
  for (std::size_t i = 0; i < stops.size(); ++i) {
    it.stops.push_back(
        PoiRefFromJson(map, stops[i], sctx + "[" + std::to_string(i) + "]"));
  }
  it.departure = ClockFromJson(Field(j, "departure", ctx), Sub(ctx, "departure"));
  return it;
}

Json LegToJson(const Leg& leg) {
  Json j;
  j["from"] = leg.from.v;
  j["to"] = leg.to.v;
  j["mode"] = leg.mode == TravelMode::kDrive ? "drive" : "walk";
  j["depart"] = ClockTime::OfInstant(leg.depart).ToString();
  j["depart_min"] = MinutesToJson(leg.depart);
  j["travel_min"] = leg.travel_min;
  j["arrive"] = ClockTime::OfInstant(leg.arrive).ToString();
  j["arrive_min"] = MinutesToJson(leg.arrive);
  j["dwell_min"] = MinutesToJson(leg.dwell_min);
  j["absorbed_into_charge"] = leg.absorbed_into_charge;
  return j;
}

Json LegsToJson(const std::vector<Leg>& legs) {
  Json out = Json::array();
  for (const Leg& leg : legs) out.push_back(LegToJson(leg));
  return out;
}

Json PlanToJson(const WorldMap& map, const EvaluatedPlan& plan) {
  Json j;
  Json names = Json::array();
  for (PoiId id : plan.itinerary.stops) names.push_back(map.poi(id).name);
  j["stops"] = ItineraryToJson(plan.itinerary)["stops"];
  j["stop_names"] = std::move(names);
  j["departure"] = plan.itinerary.departure.ToString();
  j["origin_dwell_min"] = MinutesToJson(plan.origin_dwell);
  j["legs"] = LegsToJson(plan.legs);
  j["total_min"] = MinutesToJson(plan.total);
  j["feasible"] = plan.feasible;
  Json violations = Json::array();
  for (const Violation& v : plan.violations) violations.push_back(v.Tag());
  j["violations"] = std::move(violations);
  return j;
}

}  // namespace topkit
