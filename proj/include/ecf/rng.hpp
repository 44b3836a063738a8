// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace ecf {

// Philox4x32-10 counter-based generator. Each (seed, stream) pair yields an
// independent reproducible sequence, so placement, shadowing, fast fading and
// solver restarts can be drawn from separate streams without coupling.
class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream) : pos_(0), have_cache_(false), buf_idx_(4) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    stream_[0] = static_cast<uint32_t>(stream);
    stream_[1] = static_cast<uint32_t>(stream >> 32);
  }

  explicit Rng(uint64_t seed) : Rng(seed, 0) {}

  uint32_t next_u32() {
    if (buf_idx_ >= 4) refill();
    return buf_[buf_idx_++];
  }

  uint64_t next_u64() {
    uint64_t lo = next_u32();
    uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // index in [0, n)
  uint64_t below(uint64_t n) { return next_u64() % n; }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  // standard normal via Box-Muller (pair cached)
  double normal() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    have_cache_ = true;
    return r * std::cos(a);
  }

  // circularly-symmetric complex Gaussian, unit total variance
  std::complex<double> cnormal() {
    const double s = 0.70710678118654752440;
    const double re = normal() * s;
    const double im = normal() * s;
    return {re, im};
  }

  // Runs Philox on an explicit counter/key; exposed for known-answer tests.
  static void philox4x32(const uint32_t ctr_in[4], const uint32_t key_in[2], uint32_t out[4]);

  // Splitmix-style label mixing used to derive sub-seeds and stream ids.
  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ULL + b;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> labels) {
    uint64_t h = mix(seed, 0x243f6a8885a308d3ULL);
    for (uint64_t l : labels) h = mix(h, l);
    return h;
  }

 private:
  void refill() {
    uint32_t ctr[4] = {static_cast<uint32_t>(pos_), static_cast<uint32_t>(pos_ >> 32),
                       stream_[0], stream_[1]};
    philox4x32(ctr, key_, buf_);
    ++pos_;
    buf_idx_ = 0;
  }

  uint32_t key_[2];
  uint32_t stream_[2];
  uint64_t pos_;
  uint32_t buf_[4];
  double cache_ = 0.0;
  bool have_cache_;
  int buf_idx_;
};

// fixed stream labels for the channel generation pipeline
namespace streams {
inline constexpr uint64_t kPlacement = 0x706c6163ULL;   // "plac"
inline constexpr uint64_t kShadowing = 0x73686164ULL;   // "shad"
inline constexpr uint64_t kFastFading = 0x66616465ULL;  // "fade"
inline constexpr uint64_t kSolver = 0x736f6c76ULL;      // "solv"
}  // namespace streams

}  // namespace ecf
