#pragma once

#include <cmath>
#include <cstdint>

namespace sqmf {

// Counter-based generator: output i of stream s under seed k is
// splitmix64(k ^ (s * 0x9e3779b97f4a7c15) + i).  Stateless apart from the
// counter, so identical (seed, stream) pairs reproduce bit-identically on
// any platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(seed ^ (stream * 0x9e3779b97f4a7c15ULL)), counter_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = base_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (lo, hi].
  double uniform_open_closed(double lo, double hi) {
    return lo + (hi - lo) * (1.0 - uniform());
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    have_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sqmf
