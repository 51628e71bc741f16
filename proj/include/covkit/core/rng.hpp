#pragma once

// Counter-based pseudo-random stream. Every draw is a pure function of
// (seed, counter), so streams can be split by index and replayed
// bit-identically on any platform.

#include <cmath>
#include <cstdint>
#include <string>

namespace covkit {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static constexpr const char* algorithm() { return "splitmix64"; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  // Independent stream derived from (seed, index); used to parallelize
  // Monte-Carlo loops without sharing state.
  RngStream substream(std::uint64_t index) const {
    return RngStream(detail::splitmix64(seed_ ^ (0xA5A5A5A5A5A5A5A5ULL + index)));
  }

  std::uint64_t next_u64() {
    return detail::splitmix64(seed_ + 0x9E3779B97F4A7C15ULL * (++counter_));
  }

  // Uniform on (0, 1]; never returns 0 so log(u) is always finite.
  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; draws two uniforms per pair, caches the second value.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // k uniform in {0, ..., n-1} via rejection-free scaling (n is tiny here).
  std::size_t uniform_index(std::size_t n) {
    const double u = uniform();
    std::size_t k = static_cast<std::size_t>(u * static_cast<double>(n));
    return k >= n ? n - 1 : k;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace covkit
