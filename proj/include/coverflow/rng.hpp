#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace coverflow {

// Named substreams of one master seed. The bounded draw is done here rather
// than through std::uniform_int_distribution so that streams are identical
// across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::string_view stream = "main") : eng_(mix(seed, stream)) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t x = eng_();
      if (x < limit) return x % n;
    }
  }

  // uniform in [lo, hi]
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return (eng_() >> 63) != 0; }

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
  static std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : stream) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return splitmix(splitmix(seed) ^ h);
  }

  std::mt19937_64 eng_;
};

}  // namespace coverflow
