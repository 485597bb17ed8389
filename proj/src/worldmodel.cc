#include "topkit/worldmodel.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "topkit/rng.h"

namespace topkit {

namespace {

const std::vector<std::string>& PlaceWords() {
  static const std::vector<std::string> words = {
      "Harbor",   "Maple",    "Cedar",     "Riverside", "Summit",
      "Lakeview", "Oakridge", "Granite",   "Willow",    "Beacon",
      "Meadow",   "Birch",    "Crescent",  "Juniper",   "Stonegate",
      "Parkside", "Elmwood",  "Northgate", "Sunset",    "Ashford",
      "Bayview",  "Hillcrest", "Foxglove", "Linden",    "Quarry",
      "Orchard",  "Mill Pond", "Westbrook", "Copperfield", "Pinecrest",
      "Fairview", "Kingsley"};
  return words;
}

std::string NameFor(Category c, const std::string& place,
                    const std::optional<std::string>& brand) {
  switch (c) {
    case Category::kApartment: return place + " Apartments";
    case Category::kCompany: return place + " Labs";
    case Category::kCharging: return *brand + " " + place + " Station";
    case Category::kCafe: return *brand + " " + place;
    case Category::kGym: return place + " Fitness";
    case Category::kMarket: return place + " Market";
    case Category::kRestaurant: return place + " Bistro";
  }
  return place;
}

double Round(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

TravelMatrix::TravelMatrix(int n) : n_(n) {
  const auto cells = static_cast<std::size_t>(n) * n;
  for (auto& d : drive_) d.assign(cells, 0);
  walk_.assign(cells, 0);
  distance_.assign(cells, 0.0);
}

std::map<Category, std::array<int, 24>>
GenerationConfig::DefaultPopularityProfiles() {
  return {
      {Category::kApartment, {}},
      {Category::kCompany, {}},
      {Category::kCharging,
       {20, 20, 20, 20, 20, 20, 20, 20, 20, 20, 20, 20,
        20, 20, 20, 20, 20, 20, 20, 20, 20, 20, 20, 20}},
      // Morning peak at 9.
      {Category::kCafe,
       {0, 0, 0, 0, 0, 0, 15, 50, 75, 90, 70, 55,
        50, 45, 45, 40, 35, 30, 20, 15, 10, 5, 0, 0}},
      // Peaks at 7 and 19.
      {Category::kGym,
       {2, 0, 0, 0, 0, 10, 45, 80, 60, 35, 25, 25,
        30, 25, 25, 30, 40, 60, 75, 85, 60, 35, 15, 5}},
      // Late-afternoon peak at 17.
      {Category::kMarket,
       {0, 0, 0, 0, 0, 0, 0, 5, 15, 25, 35, 45,
        50, 45, 45, 55, 70, 85, 75, 55, 35, 20, 5, 0}},
      // Meal peaks at 12 and 18.
      {Category::kRestaurant,
       {5, 3, 2, 0, 0, 0, 2, 5, 10, 15, 25, 50,
        85, 70, 40, 30, 40, 65, 90, 75, 50, 30, 15, 8}},
  };
}

void GenerationConfig::Validate() const {
  for (Category c : kAllCategories) {
    auto it = counts.find(c);
    if (it == counts.end() || it->second <= 0) {
      throw ConfigError("category count for '" +
                        std::string(CategorySlug(c)) + "' must be positive");
    }
  }
  if (!(extent_km > 0.0)) throw ConfigError("city extent must be positive");
  if (!(circuity >= 1.0)) throw ConfigError("circuity must be >= 1");
  for (double s : speed_kmh) {
    if (!(s > 0.0)) throw ConfigError("bucket speeds must be positive");
  }
  if (speed_kmh[1] > speed_kmh[0] || speed_kmh[3] > speed_kmh[0]) {
    throw ConfigError(
        "rush-hour speeds (09:00, 18:00) must not exceed the 00:00 speed");
  }
  if (!(walk_speed_kmh > 0.0)) throw ConfigError("walk speed must be positive");
  if (!(jitter_min > 0.0) || jitter_max < jitter_min) {
    throw ConfigError("jitter range must satisfy 0 < min <= max");
  }
  if (popularity_jitter < 0) {
    throw ConfigError("popularity jitter must be nonnegative");
  }
  for (Category c : kAllCategories) {
    auto h = hours.find(c);
    if (h == hours.end()) {
      throw ConfigError("missing opening hours for '" +
                        std::string(CategorySlug(c)) + "'");
    }
    if (h->second.open_minute < 0 ||
        h->second.close_minute > kMinutesPerDay ||
        h->second.open_minute >= h->second.close_minute) {
      throw ConfigError("invalid opening hours for '" +
                        std::string(CategorySlug(c)) + "'");
    }
    auto p = popularity_profiles.find(c);
    if (p == popularity_profiles.end()) {
      throw ConfigError("missing popularity profile for '" +
                        std::string(CategorySlug(c)) + "'");
    }
    for (int v : p->second) {
      if (v < 0 || v > 100) {
        throw ConfigError("popularity profile values must lie in [0, 100]");
      }
    }
  }
  for (const auto& [c, list] : brands) {
    if (list.empty()) {
      throw ConfigError("brand list for '" + std::string(CategorySlug(c)) +
                        "' is empty");
    }
  }
  for (Category c : {Category::kCharging, Category::kCafe}) {
    if (!brands.contains(c)) {
      throw ConfigError("brand list required for '" +
                        std::string(CategorySlug(c)) + "'");
    }
  }
}

double RoadDistanceKm(double x1, double y1, double x2, double y2,
                      double circuity) {
  const double dx = x2 - x1;
  const double dy = y2 - y1;
  return Round(std::sqrt(dx * dx + dy * dy) * circuity, 10.0);
}

WorldMap GenerateMap(std::uint64_t seed, const GenerationConfig& config) {
  config.Validate();
  Rng rng(seed);

  std::vector<Poi> pois;
  for (Category c : kAllCategories) {
    const int count = config.counts.at(c);
    std::vector<std::string> places = PlaceWords();
    rng.Shuffle(places);
    const auto brands = config.brands.find(c);
    for (int k = 0; k < count; ++k) {
      Poi poi;
      poi.id = PoiId{static_cast<std::int32_t>(pois.size())};
      poi.category = c;
      if (brands != config.brands.end()) {
        poi.brand = brands->second[k % brands->second.size()];
      }
      std::string place = places[k % places.size()];
      if (k >= static_cast<int>(places.size())) {
        place += " " + std::to_string(k / places.size() + 1);
      }
      poi.name = NameFor(c, place, poi.brand);
      poi.base_dwell = BaseDwellMinutes(c);
      poi.open_minute = config.hours.at(c).open_minute;
      poi.close_minute = config.hours.at(c).close_minute;
      pois.push_back(std::move(poi));
    }
  }

  const auto& profiles = config.popularity_profiles;
  for (Poi& poi : pois) {
    poi.x_km = Round(rng.Uniform(0.0, config.extent_km), 1000.0);
    poi.y_km = Round(rng.Uniform(0.0, config.extent_km), 1000.0);
    poi.price_level = static_cast<int>(rng.IntIn(1, 3));
    const auto& profile = profiles.at(poi.category);
    for (int h = 0; h < 24; ++h) {
      const auto j =
          rng.IntIn(-config.popularity_jitter, config.popularity_jitter);
      poi.popularity[h] =
          static_cast<int>(std::clamp<std::int64_t>(profile[h] + j, 0, 100));
    }
  }

  const int n = static_cast<int>(pois.size());
  TravelMatrix matrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Poi& a = pois[i];
      const Poi& b = pois[j];
      const double jitter = rng.Uniform(config.jitter_min, config.jitter_max);
      const double dx = b.x_km - a.x_km;
      const double dy = b.y_km - a.y_km;
      const double euclid = std::sqrt(dx * dx + dy * dy);
      const double km =
          RoadDistanceKm(a.x_km, a.y_km, b.x_km, b.y_km, config.circuity);
      const int walk =
          static_cast<int>(std::round(euclid / config.walk_speed_kmh * 60.0));
      const PoiId pi{i};
      const PoiId pj{j};
      matrix.set_distance(pi, pj, km);
      matrix.set_distance(pj, pi, km);
      matrix.set_walk(pi, pj, walk);
      matrix.set_walk(pj, pi, walk);
      for (Bucket bucket : kAllBuckets) {
        const double speed = config.speed_kmh[static_cast<int>(bucket)];
        const int drive =
            static_cast<int>(std::round(km / speed * 60.0 * jitter));
        matrix.set_drive(bucket, pi, pj, drive);
        matrix.set_drive(bucket, pj, pi, drive);
      }
    }
  }

  return WorldMap(std::move(pois), std::move(matrix), seed, config.exclusions);
}

WorldMap::WorldMap(std::vector<Poi> pois, TravelMatrix matrix,
                   std::uint64_t seed, std::vector<CategoryPair> exclusions)
    : pois_(std::move(pois)),
      matrix_(std::move(matrix)),
      seed_(seed),
      exclusions_(std::move(exclusions)) {
  Validate();
}

void WorldMap::Validate() const {
  const int n = size();
  if (n == 0) throw ValidationError("map has no POIs");
  if (matrix_.size() != n) {
    throw ValidationError("travel matrix dimension " +
                          std::to_string(matrix_.size()) +
                          " does not match POI count " + std::to_string(n));
  }
  std::set<std::string> names;
  for (int i = 0; i < n; ++i) {
    const Poi& p = pois_[i];
    const std::string where = "poi " + std::to_string(i);
    if (p.id.v != i) throw ValidationError(where + ": ids must be dense 0..N-1");
    if (p.name.empty()) throw ValidationError(where + ": empty name");
    if (!names.insert(p.name).second) {
      throw ValidationError(where + ": duplicate name '" + p.name + "'");
    }
    if (p.price_level < 1 || p.price_level > 3) {
      throw ValidationError(where + ": price_level must be 1..3");
    }
    if (p.open_minute < 0 || p.close_minute > kMinutesPerDay ||
        p.open_minute >= p.close_minute) {
      throw ValidationError(where + ": invalid opening hours");
    }
    const auto expected = BaseDwellMinutes(p.category);
    if (p.base_dwell != expected) {
      throw ValidationError(
          where + ": base_dwell_min must be " +
          (expected ? std::to_string(*expected) : std::string("null")) +
          " for category '" + std::string(CategorySlug(p.category)) + "'");
    }
    for (int h = 0; h < 24; ++h) {
      if (p.popularity[h] < 0 || p.popularity[h] > 100) {
        throw ValidationError(where + ": popularity[" + std::to_string(h) +
                              "] = " + std::to_string(p.popularity[h]) +
                              " outside [0, 100]");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const PoiId a{i};
      const PoiId b{j};
      const std::string where =
          "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      for (Bucket bucket : kAllBuckets) {
        const int d = matrix_.drive(bucket, a, b);
        if (d < 0) throw ValidationError(where + ": negative drive minutes");
        if (i == j && d != 0) {
          throw ValidationError(where + ": drive diagonal must be zero");
        }
      }
      const int free_flow = matrix_.drive(Bucket::k0000, a, b);
      if (matrix_.drive(Bucket::k0900, a, b) < free_flow ||
          matrix_.drive(Bucket::k1800, a, b) < free_flow) {
        throw ValidationError(where +
                              ": rush-hour drive time below the 00:00 time");
      }
      const int walk = matrix_.walk(a, b);
      const double km = matrix_.distance(a, b);
      if (walk < 0 || km < 0.0) {
        throw ValidationError(where + ": negative walk minutes or distance");
      }
      if (i == j && (walk != 0 || km != 0.0)) {
        throw ValidationError(where + ": walk/distance diagonal must be zero");
      }
      if (km > 0.5 && walk < free_flow) {
        throw ValidationError(where +
                              ": walking faster than free-flow driving");
      }
    }
  }
}

const Poi& WorldMap::poi(PoiId id) const {
  CheckId(id);
  return pois_[id.v];
}

void WorldMap::CheckId(PoiId id) const {
  if (!Contains(id)) {
    throw LookupError("unknown POI id " + std::to_string(id.v));
  }
}

std::optional<PoiId> WorldMap::FindByName(std::string_view name) const {
  for (const Poi& p : pois_) {
    if (p.name == name) return p.id;
  }
  return std::nullopt;
}

std::vector<PoiId> WorldMap::OfCategory(Category c) const {
  std::vector<PoiId> out;
  for (const Poi& p : pois_) {
    if (p.category == c) out.push_back(p.id);
  }
  return out;
}

bool WorldMap::Excluded(std::string_view a, std::string_view b) const {
  for (const auto& [x, y] : exclusions_) {
    if ((x == a && y == b) || (x == b && y == a)) return true;
  }
  return false;
}

double DistanceKm(const WorldMap& map, PoiId from, PoiId to) {
  map.CheckId(from);
  map.CheckId(to);
  return map.matrix().distance(from, to);
}

}  // namespace topkit
