#pragma once

#include <cstdint>
#include <cmath>
#include <string_view>

namespace qdb {

// splitmix64 step (Vigna). Used both as a stream generator and as a mixer
// so that derived streams (seed, label, counter) are platform-independent.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Small deterministic PRNG with identical output on every platform.
// std::mt19937_64 would do for a single binary, but the distributions on
// top of it are implementation-defined; everything here is hand-specified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0x853c49e6748fea9bULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  int next_int(int n) {
    return static_cast<int>(next_double() * n);
  }

  // standard normal via Box-Muller; caches the spare draw
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One normal draw keyed by a (seed, label, counter) triple. Streams derived
// from distinct keys are independent, so a policy's arm choices cannot
// perturb another policy's noise realizations.
inline double keyed_normal(std::uint64_t seed, std::uint64_t label, std::uint64_t counter) {
  Rng rng(hash_combine(hash_combine(seed, label), counter));
  return rng.next_normal();
}

}  // namespace qdb
