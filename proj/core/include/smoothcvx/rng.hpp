#pragma once

#include <cstddef>
#include <cstdint>

namespace smoothcvx {

/// SplitMix64 (Steele, Lea & Flood). Every random choice in the verification
/// harness goes through this generator so witnesses replay bit-for-bit and
/// can be regenerated from another language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Uniform doubles take the top 53 bits: (next() >> 11) * 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Child generator for an independent stream.
  SplitMix64 fork() noexcept { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

/// Radical inverse of `index` in the given base (Halton coordinate).
inline double halton(std::uint64_t index, unsigned base) noexcept {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// First primes, used as Halton bases per coordinate.
inline unsigned halton_base(std::size_t coordinate) noexcept {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  return kPrimes[coordinate % (sizeof(kPrimes) / sizeof(kPrimes[0]))];
}

}  // namespace smoothcvx
