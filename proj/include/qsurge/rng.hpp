#pragma once

#include <cstdint>

namespace qsurge {

// Counter-based hashing (splitmix64 finalizer). Every random decision in the
// sampler is a pure function of (seed, stream, counter), so results do not
// depend on how work is split across threads.
inline constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline constexpr uint64_t hash2(uint64_t a, uint64_t b) {
  return splitmix64(splitmix64(a) ^ b);
}

inline constexpr uint64_t hash3(uint64_t a, uint64_t b, uint64_t c) {
  return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

inline constexpr uint64_t hash4(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  return splitmix64(splitmix64(splitmix64(splitmix64(a) ^ b) ^ c) ^ d);
}

// Map a 64-bit hash to a double in [0, 1).
inline constexpr double u01(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Small sequential generator for places where a stream is more natural than a
// counter (tableau measurement coins, test shuffles).
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(uint64_t seed) {
    for (auto& w : s_) {
      seed = splitmix64(seed + 0x9e3779b97f4a7c15ull);
      w = seed;
    }
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double next_u01() { return u01(next()); }
  bool next_bit() { return (next() >> 63) != 0; }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace qsurge
