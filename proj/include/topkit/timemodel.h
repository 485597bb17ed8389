#pragma once

#include <optional>

#include "topkit/core.h"
#include "topkit/worldmodel.h"

namespace topkit {

// Traffic snapshot governing a departure at `t`. Half-open windows:
// [06:00,10:30) -> 09:00, [10:30,15:00) -> 12:00, [15:00,21:00) -> 18:00,
// everything else -> 00:00.
Bucket BucketOf(ClockTime t);

// Crowd level for the hour containing `t`.
int PopularityAt(const Poi& poi, ClockTime t);

// Expected stay at `poi` when arriving at `t`: base x (1 + p(t)/100), or the
// override when one is given. POIs without a base dwell stay 0 minutes.
Minutes DwellMinutes(const Poi& poi, ClockTime t,
                     std::optional<Minutes> override_minutes = std::nullopt);

// Whole-minute drive time for a leg that departs at `depart`.
int DriveMinutes(const WorldMap& map, PoiId from, PoiId to, ClockTime depart);

}  // namespace topkit
