// SPDX-License-Identifier: Apache-2.0
#include "ecf/rng.hpp"

#include <cmath>

namespace ecf {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(uint32_t x[4], const uint32_t k[2]) {
  const uint64_t p0 = static_cast<uint64_t>(kMul0) * x[0];
  const uint64_t p1 = static_cast<uint64_t>(kMul1) * x[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
  const uint32_t lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
  const uint32_t lo1 = static_cast<uint32_t>(p1);
  const uint32_t y0 = hi1 ^ x[1] ^ k[0];
  const uint32_t y1 = lo1;
  const uint32_t y2 = hi0 ^ x[3] ^ k[1];
  const uint32_t y3 = lo0;
  x[0] = y0;
  x[1] = y1;
  x[2] = y2;
  x[3] = y3;
}

}  // namespace

void Rng::philox4x32(const uint32_t ctr_in[4], const uint32_t key_in[2], uint32_t out[4]) {
  uint32_t x[4] = {ctr_in[0], ctr_in[1], ctr_in[2], ctr_in[3]};
  uint32_t k[2] = {key_in[0], key_in[1]};
  for (int r = 0; r < 10; ++r) {
    round_once(x, k);
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  out[0] = x[0];
  out[1] = x[1];
  out[2] = x[2];
  out[3] = x[3];
}

}  // namespace ecf
