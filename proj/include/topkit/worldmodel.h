#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topkit/core.h"

namespace topkit {

struct Poi {
  PoiId id;
  std::string name;
  Category category = Category::kApartment;
  double x_km = 0.0;
  double y_km = 0.0;
  std::optional<std::string> brand;
  int price_level = 1;
  // [open_minute, close_minute) in minutes since midnight; 0/1440 is always
  // open.
  int open_minute = 0;
  int close_minute = kMinutesPerDay;
  std::optional<int> base_dwell;
  std::array<int, 24> popularity{};

  bool AlwaysOpen() const {
    return open_minute == 0 && close_minute == kMinutesPerDay;
  }

  bool operator==(const Poi&) const = default;
};

// Dense per-pair tables, row-major by POI id.
class TravelMatrix {
 public:
  TravelMatrix() = default;
  explicit TravelMatrix(int n);

  int size() const { return n_; }

  int drive(Bucket b, PoiId from, PoiId to) const {
    return drive_[static_cast<int>(b)][Index(from, to)];
  }
  int walk(PoiId from, PoiId to) const { return walk_[Index(from, to)]; }
  double distance(PoiId from, PoiId to) const {
    return distance_[Index(from, to)];
  }

  void set_drive(Bucket b, PoiId from, PoiId to, int minutes) {
    drive_[static_cast<int>(b)][Index(from, to)] = minutes;
  }
  void set_walk(PoiId from, PoiId to, int minutes) {
    walk_[Index(from, to)] = minutes;
  }
  void set_distance(PoiId from, PoiId to, double km) {
    distance_[Index(from, to)] = km;
  }

  std::span<const int> drive_row_major(Bucket b) const {
    return drive_[static_cast<int>(b)];
  }
  std::span<const int> walk_row_major() const { return walk_; }
  std::span<const double> distance_row_major() const { return distance_; }

  bool operator==(const TravelMatrix&) const = default;

 private:
  std::size_t Index(PoiId from, PoiId to) const {
    return static_cast<std::size_t>(from.v) * n_ + to.v;
  }

  int n_ = 0;
  std::array<std::vector<int>, kNumBuckets> drive_;
  std::vector<int> walk_;
  std::vector<double> distance_;
};

using CategoryPair = std::pair<std::string, std::string>;

struct OpeningHours {
  int open_minute = 0;
  int close_minute = kMinutesPerDay;
};

// Parameters of the synthetic city. Defaults reproduce the reference
// distribution: 6/5/6/9/6/7/11 POIs over a 10 km square.
struct GenerationConfig {
  std::map<Category, int> counts = {
      {Category::kApartment, 6}, {Category::kCompany, 5},
      {Category::kCharging, 6},  {Category::kCafe, 9},
      {Category::kGym, 6},       {Category::kMarket, 7},
      {Category::kRestaurant, 11}};
  double extent_km = 10.0;
  double circuity = 1.3;
  std::array<double, kNumBuckets> speed_kmh = {34.0, 22.0, 28.0, 20.0};
  double walk_speed_kmh = 4.8;
  double jitter_min = 0.9;
  double jitter_max = 1.1;
  int popularity_jitter = 10;
  std::map<Category, std::vector<std::string>> brands = {
      {Category::kCharging, {"VoltPoint", "ChargeNow", "AmpWay"}},
      {Category::kCafe, {"Bean Street", "Daily Grind", "Copper Cup"}}};
  std::map<Category, OpeningHours> hours = {
      {Category::kApartment, {0, 1440}},  {Category::kCompany, {0, 1440}},
      {Category::kCharging, {0, 1440}},   {Category::kCafe, {420, 1260}},
      {Category::kGym, {360, 1380}},      {Category::kMarket, {480, 1320}},
      {Category::kRestaurant, {600, 1380}}};
  std::map<Category, std::array<int, 24>> popularity_profiles =
      DefaultPopularityProfiles();
  std::vector<CategoryPair> exclusions = {{"gas", "charging"}};

  static std::map<Category, std::array<int, 24>> DefaultPopularityProfiles();

  // Throws ConfigError describing the first bad parameter.
  void Validate() const;
};

class WorldMap {
 public:
  WorldMap() = default;
  // Validates every map invariant; throws ValidationError.
  WorldMap(std::vector<Poi> pois, TravelMatrix matrix, std::uint64_t seed,
           std::vector<CategoryPair> exclusions);

  std::span<const Poi> pois() const { return pois_; }
  const Poi& poi(PoiId id) const;  // throws LookupError
  const TravelMatrix& matrix() const { return matrix_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<CategoryPair>& exclusions() const { return exclusions_; }
  int size() const { return static_cast<int>(pois_.size()); }

  bool Contains(PoiId id) const { return id.v >= 0 && id.v < size(); }
  void CheckId(PoiId id) const;  // throws LookupError
  std::optional<PoiId> FindByName(std::string_view name) const;
  std::vector<PoiId> OfCategory(Category c) const;
  // True when the two category slugs form a forbidden pair.
  bool Excluded(std::string_view a, std::string_view b) const;

  bool operator==(const WorldMap&) const = default;

 private:
  void Validate() const;

  std::vector<Poi> pois_;
  TravelMatrix matrix_;
  std::uint64_t seed_ = 0;
  std::vector<CategoryPair> exclusions_;
};

WorldMap GenerateMap(std::uint64_t seed,
                     const GenerationConfig& config = GenerationConfig{});

// Circuity-scaled straight-line distance rounded to 0.1 km.
double RoadDistanceKm(double x1, double y1, double x2, double y2,
                      double circuity);

double DistanceKm(const WorldMap& map, PoiId from, PoiId to);

// Canonical single-line JSON; identical maps give identical bytes.
std::string SerializeMap(const WorldMap& map);
WorldMap ParseMap(std::string_view json_text);
void SaveMap(const WorldMap& map, const std::filesystem::path& path);
WorldMap LoadMap(const std::filesystem::path& path);

// Content digest of SerializeMap output, "fnv1a64:<16 hex digits>".
std::string MapHash(const WorldMap& map);

// Reads a generation config JSON; unspecified keys keep their defaults.
GenerationConfig LoadGenerationConfig(const std::filesystem::path& path);

}  // namespace topkit
