#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "topkit/core.h"

namespace topkit::internal {

using Json = nlohmann::ordered_json;

inline Json ParseJsonText(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline const Json& Field(const Json& obj, std::string_view key,
                         std::string_view ctx) {
  if (!obj.is_object()) {
    throw ParseError(std::string(ctx) + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(ctx) + ": missing field '" +
                     std::string(key) + "'");
  }
  return *it;
}

inline const Json* OptionalField(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

template <typename T>
T As(const Json& j, std::string_view ctx) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ParseError(std::string(ctx) + ": wrong type (" +
                     std::string(j.type_name()) + ")");
  }
}

template <typename T>
T FieldAs(const Json& obj, std::string_view key, std::string_view ctx) {
  return As<T>(Field(obj, key, ctx), std::string(ctx) + "." + std::string(key));
}

inline const Json& ArrayOf(const Json& j, std::size_t size,
                           std::string_view ctx) {
  if (!j.is_array()) throw ParseError(std::string(ctx) + ": expected an array");
  if (size != static_cast<std::size_t>(-1) && j.size() != size) {
    throw ParseError(std::string(ctx) + ": expected " + std::to_string(size) +
                     " entries, found " + std::to_string(j.size()));
  }
  return j;
}

}  // namespace topkit::internal
