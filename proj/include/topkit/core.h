#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace topkit {

// Errors. Every failure surfaced to a caller derives from Error so the CLI
// can map families onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class LookupError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class GenerationError : public Error {
 public:
  using Error::Error;
};

enum class Category : std::uint8_t {
  kApartment,
  kCompany,
  kCharging,
  kCafe,
  kGym,
  kMarket,
  kRestaurant,
};

inline constexpr int kNumCategories = 7;
inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::kApartment, Category::kCompany, Category::kCharging,
    Category::kCafe,      Category::kGym,     Category::kMarket,
    Category::kRestaurant};

// Categories whose POIs carry a base dwell time.
inline constexpr std::array<Category, 5> kDwellCategories = {
    Category::kCharging, Category::kCafe, Category::kGym, Category::kMarket,
    Category::kRestaurant};

// Slug used in files and exclusion rules ("cafe", "charging", ...).
std::string_view CategorySlug(Category c);
// Human-facing noun used in question text ("charging station", ...).
std::string_view CategoryNoun(Category c);
std::optional<Category> CategoryFromSlug(std::string_view slug);
Category ParseCategory(std::string_view slug);  // throws ParseError

// Base dwell minutes per category; nullopt for apartments and companies.
std::optional<int> BaseDwellMinutes(Category c);

struct PoiId {
  std::int32_t v = -1;

  constexpr auto operator<=>(const PoiId&) const = default;
};

// Minutes with exact hundredth resolution. Dwell values are base x (100 + p)
// hundredths, so all trip arithmetic stays integral.
class Minutes {
 public:
  constexpr Minutes() = default;

  static constexpr Minutes FromCenti(std::int64_t centi) {
    Minutes m;
    m.centi_ = centi;
    return m;
  }
  static constexpr Minutes Whole(std::int64_t minutes) {
    return FromCenti(minutes * 100);
  }
  // Rounds to the nearest hundredth.
  static Minutes FromDouble(double minutes);

  constexpr std::int64_t centi() const { return centi_; }
  double value() const { return static_cast<double>(centi_) / 100.0; }
  // Value rounded half-up to one decimal, for answer normal forms.
  double RoundedToTenth() const;

  constexpr Minutes& operator+=(Minutes o) {
    centi_ += o.centi_;
    return *this;
  }
  constexpr Minutes& operator-=(Minutes o) {
    centi_ -= o.centi_;
    return *this;
  }
  friend constexpr Minutes operator+(Minutes a, Minutes b) { return a += b; }
  friend constexpr Minutes operator-(Minutes a, Minutes b) { return a -= b; }
  friend constexpr Minutes operator*(std::int64_t k, Minutes a) {
    return FromCenti(k * a.centi_);
  }
  constexpr auto operator<=>(const Minutes&) const = default;

 private:
  std::int64_t centi_ = 0;
};

inline constexpr int kMinutesPerDay = 1440;

// Wall-clock minute of day, 0..1439.
class ClockTime {
 public:
  constexpr ClockTime() = default;
  // Wraps modulo one day.
  static constexpr ClockTime FromMinuteOfDay(std::int64_t minute) {
    ClockTime t;
    t.minute_ = static_cast<int>(((minute % kMinutesPerDay) + kMinutesPerDay) %
                                 kMinutesPerDay);
    return t;
  }
  static constexpr ClockTime At(int hour, int minute) {
    return FromMinuteOfDay(hour * 60 + minute);
  }
  // Clock reading at a simulation instant (minutes since the departure
  // day's midnight), truncated to the minute.
  static ClockTime OfInstant(Minutes instant);
  // Accepts "H:MM" or "HH:MM".
  static ClockTime Parse(std::string_view text);

  constexpr int minute_of_day() const { return minute_; }
  constexpr int hour() const { return minute_ / 60; }
  // "HH:MM".
  std::string ToString() const;
  // This clock reading as a simulation instant on the departure day.
  Minutes AsInstant() const { return Minutes::Whole(minute_); }

  constexpr ClockTime operator+(int minutes) const {
    return FromMinuteOfDay(minute_ + minutes);
  }
  constexpr auto operator<=>(const ClockTime&) const = default;

 private:
  int minute_ = 0;
};

// The four traffic snapshots, in file order.
enum class Bucket : std::uint8_t { k0000, k0900, k1200, k1800 };
inline constexpr int kNumBuckets = 4;
inline constexpr std::array<Bucket, kNumBuckets> kAllBuckets = {
    Bucket::k0000, Bucket::k0900, Bucket::k1200, Bucket::k1800};

ClockTime BucketAnchor(Bucket b);
std::string BucketLabel(Bucket b);

}  // namespace topkit
