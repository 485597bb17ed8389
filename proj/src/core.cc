#include "topkit/core.h"

#include <cmath>
#include <cstdio>

namespace topkit {

std::string_view CategorySlug(Category c) {
  switch (c) {
    case Category::kApartment: return "apartment";
    case Category::kCompany: return "company";
    case Category::kCharging: return "charging";
    case Category::kCafe: return "cafe";
    case Category::kGym: return "gym";
    case Category::kMarket: return "market";
    case Category::kRestaurant: return "restaurant";
  }
  return "unknown";
}

std::string_view CategoryNoun(Category c) {
  switch (c) {
    case Category::kApartment: return "apartment";
    case Category::kCompany: return "company";
    case Category::kCharging: return "charging station";
    case Category::kCafe: return "cafe";
    case Category::kGym: return "gym";
    case Category::kMarket: return "market";
    case Category::kRestaurant: return "restaurant";
  }
  return "unknown";
}

std::optional<Category> CategoryFromSlug(std::string_view slug) {
  for (Category c : kAllCategories) {
    if (CategorySlug(c) == slug) return c;
  }
  return std::nullopt;
}

Category ParseCategory(std::string_view slug) {
  auto c = CategoryFromSlug(slug);
  if (!c) throw ParseError("unknown category '" + std::string(slug) + "'");
  return *c;
}

std::optional<int> BaseDwellMinutes(Category c) {
  switch (c) {
    case Category::kCharging: return 30;
    case Category::kCafe: return 5;
    case Category::kGym: return 25;
    case Category::kMarket: return 20;
    case Category::kRestaurant: return 60;
    case Category::kApartment:
    case Category::kCompany: return std::nullopt;
  }
  return std::nullopt;
}

Minutes Minutes::FromDouble(double minutes) {
  return FromCenti(std::llround(minutes * 100.0));
}

double Minutes::RoundedToTenth() const {
  // Half away from zero on the exact hundredths.
  std::int64_t tenths =
      centi_ >= 0 ? (centi_ + 5) / 10 : -((-centi_ + 5) / 10);
  return static_cast<double>(tenths) / 10.0;
}

ClockTime ClockTime::OfInstant(Minutes instant) {
  std::int64_t c = instant.centi();
  std::int64_t whole = c >= 0 ? c / 100 : -((-c + 99) / 100);
  return FromMinuteOfDay(whole);
}

ClockTime ClockTime::Parse(std::string_view text) {
  auto colon = text.find(':');
  auto fail = [&] {
    return ParseError("invalid clock time '" + std::string(text) +
                      "', expected HH:MM");
  };
  if (colon == std::string_view::npos || colon == 0 || colon > 2 ||
      text.size() - colon != 3) {
    throw fail();
  }
  int h = 0;
  int m = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i == colon) continue;
    char ch = text[i];
    if (ch < '0' || ch > '9') throw fail();
    if (i < colon) {
      h = h * 10 + (ch - '0');
    } else {
      m = m * 10 + (ch - '0');
    }
  }
  if (h > 23 || m > 59) throw fail();
  return At(h, m);
}

std::string ClockTime::ToString() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", hour(), minute_ % 60);
  return buf;
}

ClockTime BucketAnchor(Bucket b) {
  switch (b) {
    case Bucket::k0000: return ClockTime::At(0, 0);
    case Bucket::k0900: return ClockTime::At(9, 0);
    case Bucket::k1200: return ClockTime::At(12, 0);
    case Bucket::k1800: return ClockTime::At(18, 0);
  }
  return ClockTime();
}

std::string BucketLabel(Bucket b) { return BucketAnchor(b).ToString(); }

}  // namespace topkit
