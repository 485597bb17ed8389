#include "topkit/timemodel.h"

namespace topkit {

Bucket BucketOf(ClockTime t) {
  const int m = t.minute_of_day();
  if (m >= 6 * 60 && m < 10 * 60 + 30) return Bucket::k0900;
  if (m >= 10 * 60 + 30 && m < 15 * 60) return Bucket::k1200;
  if (m >= 15 * 60 && m < 21 * 60) return Bucket::k1800;
  return Bucket::k0000;
}

int PopularityAt(const Poi& poi, ClockTime t) { return poi.popularity[t.hour()]; }

Minutes DwellMinutes(const Poi& poi, ClockTime t,
                     std::optional<Minutes> override_minutes) {
  if (override_minutes) return *override_minutes;
  if (!poi.base_dwell) return Minutes();
  // base * (1 + p/100) minutes == base * (100 + p) hundredths.
  return Minutes::FromCenti(static_cast<std::int64_t>(*poi.base_dwell) *
                            (100 + PopularityAt(poi, t)));
}

int DriveMinutes(const WorldMap& map, PoiId from, PoiId to, ClockTime depart) {
  map.poi(from);
  map.poi(to);
  return map.matrix().drive(BucketOf(depart), from, to);
}

}  // namespace topkit
