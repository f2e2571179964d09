#pragma once

#include <cstdint>

namespace soc {

/* splitmix64; stable across platforms so seeded runs and frozen test
 * values do not depend on the standard library's engine internals */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /* uniform in [0,1) with 53 random mantissa bits */
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_in(double lo, double hi) { return lo + next_double() * (hi - lo); }

  std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  bool next_bool() { return (next_u64() & 1u) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace soc
