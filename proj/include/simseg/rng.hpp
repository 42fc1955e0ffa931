#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace simseg {

// splitmix64 finalizer. Used both as the PRNG step and for stream derivation
// so every random draw in the project is a pure function of the seeds that
// produced it, independent of platform and thread count.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a tag path,
// e.g. derive_seed(run_seed, {kStreamSimGeom, step, slot}).
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path) {
  uint64_t h = splitmix64(base ^ 0xA02B0C6CDA1C5FC3ull);
  for (uint64_t p : path) h = splitmix64(h ^ p);
  return h;
}

// Small counter-based generator. All mappings to doubles/ints are spelled out
// here rather than delegating to <random> distributions, which are not
// pinned down by the standard.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x6C078965ull)) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = uint64_t(hi - lo) + 1;
    return lo + int64_t(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; consumes two uniforms per pair, caches the second.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Child generator for a tagged substream.
  Rng fork(uint64_t tag) { return Rng(splitmix64(state_ ^ splitmix64(tag))); }

 private:
  uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// Order-independent per-coordinate hash noise in [0, 1). Safe to evaluate
// from any thread for any pixel; identical regardless of evaluation order.
inline double hash01(uint64_t seed, int64_t x, int64_t y, uint64_t salt = 0) {
  uint64_t h = splitmix64(seed ^ 0x51ED270B4A3C1D4Eull);
  h = splitmix64(h ^ uint64_t(x) * 0xC2B2AE3D27D4EB4Full);
  h = splitmix64(h ^ uint64_t(y) * 0x165667B19E3779F9ull);
  h = splitmix64(h ^ salt);
  return double(h >> 11) * 0x1.0p-53;
}

}  // namespace simseg
