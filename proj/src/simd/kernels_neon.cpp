#include <arm_neon.h>

#include <cassert>

#include "wsd/kernels.hpp"

namespace wsd::simd::neon {

namespace {

template <class Op>
std::uint64_t combine_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, Op op) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint8x16_t x = op(vreinterpretq_u8_u64(vld1q_u64(a.data() + i)), vreinterpretq_u8_u64(vld1q_u64(b.data() + i)));
    acc = vaddq_u64(acc, vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(vcntq_u8(x)))));
  }
  std::uint64_t total = vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1);
  for (; i < n; ++i) {
    const uint8x8_t x = vreinterpret_u8_u64(vcreate_u64(a[i]));
    const uint8x8_t y = vreinterpret_u8_u64(vcreate_u64(b[i]));
    const uint8x16_t z = op(vcombine_u8(x, vdup_n_u8(0)), vcombine_u8(y, vdup_n_u8(0)));
    total += vaddvq_u8(vcntq_u8(z));
  }
  return total;
}

}  // namespace

std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return combine_popcount(a, b, [](uint8x16_t x, uint8x16_t y) { return veorq_u8(x, y); });
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return combine_popcount(a, b, [](uint8x16_t x, uint8x16_t y) { return vandq_u8(x, y); });
}

double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights) {
  const std::size_t n = weights.size();
  assert(bits.size() * 64 >= n);
  // acc01 holds lanes 0 and 1, acc23 lanes 2 and 3.
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  const uint64x2_t sel01 = {1, 2};
  const uint64x2_t sel23 = {4, 8};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const std::uint64_t nibble = (bits[i >> 6] >> (i & 63)) & 0xF;
    if (nibble == 0) continue;
    const uint64x2_t v = vdupq_n_u64(nibble);
    const uint64x2_t m01 = vceqq_u64(vandq_u64(v, sel01), sel01);
    const uint64x2_t m23 = vceqq_u64(vandq_u64(v, sel23), sel23);
    const uint64x2_t w01 = vreinterpretq_u64_f64(vld1q_f64(weights.data() + i));
    const uint64x2_t w23 = vreinterpretq_u64_f64(vld1q_f64(weights.data() + i + 2));
    acc01 = vaddq_f64(acc01, vreinterpretq_f64_u64(vandq_u64(w01, m01)));
    acc23 = vaddq_f64(acc23, vreinterpretq_f64_u64(vandq_u64(w23, m23)));
  }
  double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1), vgetq_lane_f64(acc23, 0),
                    vgetq_lane_f64(acc23, 1)};
  for (; i < n; ++i) {
    if ((bits[i >> 6] >> (i & 63)) & 1U) lane[i & 3] += weights[i];
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace wsd::simd::neon
