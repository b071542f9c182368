#pragma once

#include <cstdint>
#include <span>

namespace pitdn {

// Deterministic 64-bit generator (splitmix64).  Hand-rolled so that streams
// are reproducible bit-for-bit for a given seed independent of the standard
// library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in the open interval (0, 1); never returns an endpoint.
  double uniform01_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n) by 128-bit multiply; no rejection loop, fully
  // deterministic sequence length.
  uint64_t uniform_int(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Fisher-Yates shuffle driven by this stream.
  template <class T>
  void shuffle(std::span<T> a) {
    for (std::size_t i = a.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      T tmp = a[i - 1];
      a[i - 1] = a[j];
      a[j] = tmp;
    }
  }

 private:
  uint64_t state_;
};

}  // namespace pitdn
