#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace topkit {

// Seeded generator with distributions defined here rather than by the
// standard library, whose distribution algorithms are implementation-defined.
// Output is identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t Index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = Next();
    while (x >= limit) x = Next();
    return x % n;
  }
  // Uniform in [lo, hi].
  std::int64_t IntIn(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    Index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  const T& Pick(const std::vector<T>& values) {
    return values[Index(values.size())];
  }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = Index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace topkit
