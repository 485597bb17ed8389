#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "topkit/questgen.h"

namespace topkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitVerifyMismatch = 3;

inline constexpr std::uint64_t kDefaultSeed = 7;

// Seed used when --seed is absent: $TOPKIT_SEED if set, else kDefaultSeed.
// Throws ConfigError on a malformed value.
std::uint64_t DefaultSeedFromEnv();

// Question-count overrides for gen-questions. Keys: easy, medium, hard,
// all_intention_cap, dwell_override_minutes.
GeneratorConfig LoadGeneratorConfig(const std::filesystem::path& path);

// Runs one command. args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace topkit
