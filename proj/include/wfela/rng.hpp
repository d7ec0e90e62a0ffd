#ifndef WFELA_RNG_HPP
#define WFELA_RNG_HPP

#include <cstdint>

#include "wfela/rational.hpp"

namespace wfela {

/// splitmix64: tiny deterministic generator, identical output on every
/// platform (std::uniform_int_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % n;
  }

  /// Uniform integer in [lo, hi] as a rational.
  Rational small_int(long lo, long hi) {
    return Rational(static_cast<long>(lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)))));
  }

 private:
  std::uint64_t state_;
};

}  // namespace wfela

#endif
