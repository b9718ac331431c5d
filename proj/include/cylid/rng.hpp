#pragma once

// Seeded randomness for the whole suite. The generator is splitmix64 (a
// published 64-bit counter/permutation generator), so identical seeds give
// identical draw sequences on every platform regardless of the standard
// library. One generator per logical task; never shared across threads.

#include <cstdint>
#include <stdexcept>

namespace cylid {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // [a, b), requires a < b
  double uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("SeededRng::uniform: requires a < b");
    double r = a + (b - a) * next_double();
    if (r >= b) r = std::nextafter(b, a);
    return r;
  }

  // (-w, +w) open on both sides; w == 0 yields exactly 0
  double symmetric_open(double w) {
    double u;
    do {
      u = next_double();
    } while (u == 0.0);
    return (2.0 * u - 1.0) * w;
  }

  // [0, n) without modulo bias
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("SeededRng::below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x > limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
  std::uint64_t seed_;
};

}  // namespace cylid
