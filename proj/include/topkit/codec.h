#pragma once

#include <string_view>

#include "json.hpp"
#include "topkit/solver.h"
#include "topkit/worldmodel.h"

namespace topkit {

// All files are written with insertion-ordered keys.
using Json = nlohmann::ordered_json;

Json MinutesToJson(Minutes m);
Minutes MinutesFromJson(const Json& j, std::string_view ctx);

// POI references in input may be an id or a canonical name.
PoiId PoiRefFromJson(const WorldMap& map, const Json& j, std::string_view ctx);

Json QueryToJson(const QuerySpec& query);
QuerySpec QueryFromJson(const WorldMap& map, const Json& j,
                        std::string_view ctx = "query");

Json ItineraryToJson(const Itinerary& itinerary);
Itinerary ItineraryFromJson(const WorldMap& map, const Json& j,
                            std::string_view ctx);

Json LegToJson(const Leg& leg);
Json LegsToJson(const std::vector<Leg>& legs);
// Full plan with leg table, stop names, feasibility and violation tags.
Json PlanToJson(const WorldMap& map, const EvaluatedPlan& plan);

}  // namespace topkit
