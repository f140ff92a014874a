#include <doctest.h>

#include <stdexcept>

#include <bit>
#include <vector>

#include "wsd/kernels.hpp"
#include "wsd/rng.hpp"

using namespace wsd;

namespace {

std::vector<simd::Isa> variants() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
    if (simd::available(isa)) out.push_back(isa);
  }
  return out;
}

struct Restore {
  simd::Isa saved = simd::active();
  ~Restore() { simd::set_active(saved); }
};

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& w : v) w = rng.next() & rng.next();
  return v;
}

}  // namespace

TEST_CASE("kernels: scalar reference against bit-by-bit definitions") {
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u}) {
    const auto a = random_words(rng, n), b = random_words(rng, n);
    std::uint64_t ham = 0, both = 0;
    for (std::size_t i = 0; i < n * 64; ++i) {
      const bool x = (a[i / 64] >> (i % 64)) & 1, y = (b[i / 64] >> (i % 64)) & 1;
      ham += x != y;
      both += x && y;
    }
    CHECK(simd::scalar::hamming(a, b) == ham);
    CHECK(simd::scalar::and_popcount(a, b) == both);
  }
  const std::vector<std::uint64_t> bits = {0b1011};
  const std::vector<double> w = {1.0, 2.0, 4.0, 8.0, 16.0};
  CHECK(simd::scalar::masked_sum(bits, w) == 11.0);
}

TEST_CASE("kernels: every available variant is bit-identical to the scalar reference") {
  Rng rng(99);
  for (auto isa : variants()) {
    INFO("variant " << simd::name(isa));
    for (int round = 0; round < 300; ++round) {
      const std::size_t n = rng.below(40);
      const auto a = random_words(rng, n), b = random_words(rng, n);
      const std::size_t bits = n * 64 == 0 ? 0 : n * 64 - rng.below(64);
      std::vector<double> w(bits);
      for (auto& x : w) x = (static_cast<double>(rng.below(1u << 30)) - (1u << 29)) * 1e-7;
      Restore restore;
      simd::set_active(isa);
      CHECK(simd::hamming(a, b) == simd::scalar::hamming(a, b));
      CHECK(simd::and_popcount(a, b) == simd::scalar::and_popcount(a, b));
      const double got = simd::masked_sum(a, w), want = simd::scalar::masked_sum(a, w);
      CHECK(std::bit_cast<std::uint64_t>(got) == std::bit_cast<std::uint64_t>(want));
    }
  }
}

TEST_CASE("kernels: lane order of the masked sum") {
  // Elements land in lane i % 4; lanes reduce as (l0 + l1) + (l2 + l3).
  const std::vector<std::uint64_t> bits = {~std::uint64_t{0}};
  const std::vector<double> w = {1e16, 1.0, -1e16, 1.0, 1.0};
  const double l0 = 1e16 + 1.0, l1 = 1.0, l2 = -1e16, l3 = 1.0;
  const double want = (l0 + l1) + (l2 + l3);
  for (auto isa : variants()) {
    Restore restore;
    simd::set_active(isa);
    CHECK(std::bit_cast<std::uint64_t>(simd::masked_sum(bits, w)) == std::bit_cast<std::uint64_t>(want));
  }
}

TEST_CASE("kernels: dispatch selection") {
  CHECK(simd::available(simd::Isa::scalar));
  CHECK(simd::available(simd::best_available()));
  Restore restore;
  simd::set_active(simd::Isa::scalar);
  CHECK(simd::active() == simd::Isa::scalar);
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::available(isa)) CHECK_THROWS_AS(simd::set_active(isa), std::invalid_argument);
  }
}
