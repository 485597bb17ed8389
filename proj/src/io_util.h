#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace topkit::internal {

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace topkit::internal
