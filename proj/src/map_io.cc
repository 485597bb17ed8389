#include <cstdio>

#include "io_util.h"
#include "json_util.h"
#include "topkit/worldmodel.h"

namespace topkit {

using internal::ArrayOf;
using internal::As;
using internal::Field;
using internal::FieldAs;
using internal::Json;

namespace {

constexpr std::size_t kAny = static_cast<std::size_t>(-1);

Json PoiToJson(const Poi& p) {
  Json j;
  j["id"] = p.id.v;
  j["name"] = p.name;
  j["category"] = CategorySlug(p.category);
  j["x_km"] = p.x_km;
  j["y_km"] = p.y_km;
  j["brand"] = p.brand ? Json(*p.brand) : Json(nullptr);
  j["price_level"] = p.price_level;
  j["open_minute"] = p.open_minute;
  j["close_minute"] = p.close_minute;
  j["base_dwell_min"] = p.base_dwell ? Json(*p.base_dwell) : Json(nullptr);
  j["popularity"] = p.popularity;
  return j;
}

Poi PoiFromJson(const Json& j, std::size_t index) {
  const std::string ctx = "pois[" + std::to_string(index) + "]";
  Poi p;
  p.id = PoiId{FieldAs<std::int32_t>(j, "id", ctx)};
  p.name = FieldAs<std::string>(j, "name", ctx);
  const auto slug = FieldAs<std::string>(j, "category", ctx);
  auto category = CategoryFromSlug(slug);
  if (!category) {
    throw ParseError(ctx + ".category: unknown category '" + slug + "'");
  }
  p.category = *category;
  p.x_km = FieldAs<double>(j, "x_km", ctx);
  p.y_km = FieldAs<double>(j, "y_km", ctx);
  const Json& brand = Field(j, "brand", ctx);
  if (!brand.is_null()) p.brand = As<std::string>(brand, ctx + ".brand");
  p.price_level = FieldAs<int>(j, "price_level", ctx);
  p.open_minute = FieldAs<int>(j, "open_minute", ctx);
  p.close_minute = FieldAs<int>(j, "close_minute", ctx);
  const Json& dwell = Field(j, "base_dwell_min", ctx);
  if (!dwell.is_null()) p.base_dwell = As<int>(dwell, ctx + ".base_dwell_min");
  const Json& pop = ArrayOf(Field(j, "popularity", ctx), 24,
                            ctx + ".popularity");
  for (int h = 0; h < 24; ++h) {
    p.popularity[h] =
        As<int>(pop[h], ctx + ".popularity[" + std::to_string(h) + "]");
  }
  return p;
}

template <typename T>
Json SquareToJson(std::span<const T> cells, int n) {
  Json rows = Json::array();
  for (int i = 0; i < n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < n; ++j) row.push_back(cells[i * n + j]);
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T, typename Setter>
void SquareFromJson(const Json& rows, int n, const std::string& ctx,
                    Setter set) {
  ArrayOf(rows, n, ctx);
  for (int i = 0; i < n; ++i) {
    const std::string row_ctx = ctx + "[" + std::to_string(i) + "]";
    const Json& row = ArrayOf(rows[i], n, row_ctx);
    for (int j = 0; j < n; ++j) {
      set(PoiId{i}, PoiId{j},
          As<T>(row[j], row_ctx + "[" + std::to_string(j) + "]"));
    }
  }
}

}  // namespace

std::string SerializeMap(const WorldMap& map) {
  Json j;
  j["seed"] = map.seed();
  Json pois = Json::array();
  for (const Poi& p : map.pois()) pois.push_back(PoiToJson(p));
  j["pois"] = std::move(pois);
  Json buckets = Json::array();
  for (Bucket b : kAllBuckets) buckets.push_back(BucketLabel(b));
  j["buckets"] = std::move(buckets);
  const int n = map.size();
  Json drive = Json::array();
  for (Bucket b : kAllBuckets) {
    drive.push_back(SquareToJson(map.matrix().drive_row_major(b), n));
  }
  j["drive_minutes"] = std::move(drive);
  j["walk_minutes"] = SquareToJson(map.matrix().walk_row_major(), n);
  j["distance_km"] = SquareToJson(map.matrix().distance_row_major(), n);
  Json exclusions = Json::array();
  for (const auto& [a, b] : map.exclusions()) {
    exclusions.push_back(Json::array({a, b}));
  }
  j["exclusions"] = std::move(exclusions);
  return j.dump() + "\n";
}

WorldMap ParseMap(std::string_view json_text) {
  const Json j = internal::ParseJsonText(json_text, "map");
  const std::string ctx = "map";
  const auto seed = FieldAs<std::uint64_t>(j, "seed", ctx);
  const Json& pois_json = ArrayOf(Field(j, "pois", ctx), kAny, "pois");
  std::vector<Poi> pois;
  for (std::size_t i = 0; i < pois_json.size(); ++i) {
    pois.push_back(PoiFromJson(pois_json[i], i));
  }
  const Json& buckets = ArrayOf(Field(j, "buckets", ctx), kNumBuckets, "buckets");
  for (Bucket b : kAllBuckets) {
    const auto label = As<std::string>(buckets[static_cast<int>(b)], "buckets");
    if (label != BucketLabel(b)) {
      throw ParseError("buckets: expected '" + BucketLabel(b) + "', found '" +
                       label + "'");
    }
  }
  const int n = static_cast<int>(pois.size());
  TravelMatrix matrix(n);
  const Json& drive =
      ArrayOf(Field(j, "drive_minutes", ctx), kNumBuckets, "drive_minutes");
  for (Bucket b : kAllBuckets) {
    SquareFromJson<int>(
        drive[static_cast<int>(b)], n,
        "drive_minutes[" + std::to_string(static_cast<int>(b)) + "]",
        [&](PoiId a, PoiId c, int v) { matrix.set_drive(b, a, c, v); });
  }
  SquareFromJson<int>(Field(j, "walk_minutes", ctx), n, "walk_minutes",
                      [&](PoiId a, PoiId c, int v) { matrix.set_walk(a, c, v); });
  SquareFromJson<double>(
      Field(j, "distance_km", ctx), n, "distance_km",
      [&](PoiId a, PoiId c, double v) { matrix.set_distance(a, c, v); });
  std::vector<CategoryPair> exclusions;
  const Json& ex = ArrayOf(Field(j, "exclusions", ctx), kAny, "exclusions");
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const std::string ectx = "exclusions[" + std::to_string(i) + "]";
    const Json& pair = ArrayOf(ex[i], 2, ectx);
    exclusions.emplace_back(As<std::string>(pair[0], ectx),
                            As<std::string>(pair[1], ectx));
  }
  return WorldMap(std::move(pois), std::move(matrix), seed,
                  std::move(exclusions));
}

void SaveMap(const WorldMap& map, const std::filesystem::path& path) {
  internal::WriteFile(path, SerializeMap(map));
}

WorldMap LoadMap(const std::filesystem::path& path) {
  return ParseMap(internal::ReadFile(path));
}

std::string MapHash(const WorldMap& map) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : SerializeMap(map)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

GenerationConfig LoadGenerationConfig(const std::filesystem::path& path) {
  const Json j = internal::ParseJsonText(internal::ReadFile(path), "config");
  const std::string ctx = "config";
  GenerationConfig config;
  if (const Json* counts = internal::OptionalField(j, "counts")) {
    for (const auto& [slug, value] : counts->items()) {
      auto c = CategoryFromSlug(slug);
      if (!c) throw ParseError("config.counts: unknown category '" + slug + "'");
      config.counts[*c] = As<int>(value, "config.counts." + slug);
    }
  }
  if (const Json* v = internal::OptionalField(j, "extent_km")) {
    config.extent_km = As<double>(*v, "config.extent_km");
  }
  if (const Json* v = internal::OptionalField(j, "circuity")) {
    config.circuity = As<double>(*v, "config.circuity");
  }
  if (const Json* v = internal::OptionalField(j, "speed_kmh")) {
    const Json& speeds = ArrayOf(*v, kNumBuckets, "config.speed_kmh");
    for (int b = 0; b < kNumBuckets; ++b) {
      config.speed_kmh[b] = As<double>(speeds[b], "config.speed_kmh");
    }
  }
  if (const Json* v = internal::OptionalField(j, "walk_speed_kmh")) {
    config.walk_speed_kmh = As<double>(*v, "config.walk_speed_kmh");
  }
  if (const Json* v = internal::OptionalField(j, "jitter")) {
    const Json& range = ArrayOf(*v, 2, "config.jitter");
    config.jitter_min = As<double>(range[0], "config.jitter");
    config.jitter_max = As<double>(range[1], "config.jitter");
  }
  if (const Json* v = internal::OptionalField(j, "popularity_jitter")) {
    config.popularity_jitter = As<int>(*v, "config.popularity_jitter");
  }
  if (const Json* v = internal::OptionalField(j, "brands")) {
    for (const auto& [slug, list] : v->items()) {
      config.brands[ParseCategory(slug)] =
          As<std::vector<std::string>>(list, "config.brands." + slug);
    }
  }
  if (const Json* v = internal::OptionalField(j, "hours")) {
    for (const auto& [slug, pair] : v->items()) {
      const Json& range = ArrayOf(pair, 2, "config.hours." + slug);
      config.hours[ParseCategory(slug)] = {
          As<int>(range[0], "config.hours." + slug),
          As<int>(range[1], "config.hours." + slug)};
    }
  }
  config.Validate();
  return config;
}

}  // namespace topkit
