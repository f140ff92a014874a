// Built with -mavx2 -mpopcnt; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cassert>

#include "wsd/kernels.hpp"

namespace wsd::simd::avx2 {

namespace {

// Per-byte popcount via nibble lookup, summed into four 64-bit lanes.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0F);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

template <bool Xor>
std::uint64_t combine_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(Xor ? _mm256_xor_si256(va, vb) : _mm256_and_si256(va, vb)));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(Xor ? a[i] ^ b[i] : a[i] & b[i]));
  return total;
}

}  // namespace

std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return combine_popcount<true>(a, b);
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return combine_popcount<false>(a, b);
}

double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights) {
  const std::size_t n = weights.size();
  assert(bits.size() * 64 >= n);
  const __m256i select = _mm256_setr_epi64x(1, 2, 4, 8);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const auto nibble = static_cast<long long>((bits[i >> 6] >> (i & 63)) & 0xF);
    if (nibble == 0) continue;
    const __m256i hit = _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_set1_epi64x(nibble), select), select);
    const __m256d w = _mm256_loadu_pd(weights.data() + i);
    acc = _mm256_add_pd(acc, _mm256_and_pd(w, _mm256_castsi256_pd(hit)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) {
    if ((bits[i >> 6] >> (i & 63)) & 1U) lane[i & 3] += weights[i];
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace wsd::simd::avx2
