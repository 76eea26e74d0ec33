#pragma once

#include <cstdint>

#include "dagsched/rational.hpp"

namespace dagsched {

// Splittable counter-based stream built on the splitmix64 mixer. fork() maps
// (state, key) to an independent child stream without advancing the parent,
// so values drawn for one task/job/node never depend on the order other
// entities are evaluated in.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix(seed + kGamma)) {}

  RngStream fork(std::uint64_t key) const {
    return RngStream(mix(state_ ^ mix(key + kGamma)), 0);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Inclusive bounds, unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) return lo;
    std::uint64_t span = hi - lo + 1;  // span == 0 means the full 2^64 range
    if (span == 0) return next();
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + x % span;
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform draw from the dyadic grid {lo + k (hi-lo) / 2^bits}: exact
  // rationals, endpoints included.
  Time uniform_grid(const Time& lo, const Time& hi, unsigned bits = 20) {
    if (hi <= lo) return lo;
    std::uint64_t steps = std::uint64_t(1) << bits;
    std::uint64_t k = uniform_int(0, steps);
    return lo + (hi - lo) * Time(k) / Time(steps);
  }

 private:
  RngStream(std::uint64_t raw_state, int) : state_(raw_state) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace dagsched
