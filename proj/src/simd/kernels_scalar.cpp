#include <bit>
#include <cassert>

#include "wsd/kernels.hpp"

namespace wsd::simd::scalar {

std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
  return n;
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return n;
}

double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights) {
  const std::size_t n = weights.size();
  assert(bits.size() * 64 >= n);
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t w = 0; w * 64 < n; ++w) {
    std::uint64_t word = bits[w];
    while (word != 0) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      if (i >= n) break;
      lane[i & 3] += weights[i];
      word &= word - 1;
    }
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace wsd::simd::scalar
