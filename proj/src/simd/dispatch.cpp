#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "wsd/kernels.hpp"

namespace wsd::simd {

namespace {

struct Table {
  std::uint64_t (*hamming)(std::span<const std::uint64_t>, std::span<const std::uint64_t>);
  std::uint64_t (*and_popcount)(std::span<const std::uint64_t>, std::span<const std::uint64_t>);
  double (*masked_sum)(std::span<const std::uint64_t>, std::span<const double>);
};

constexpr Table kScalar{scalar::hamming, scalar::and_popcount, scalar::masked_sum};
#if defined(WSD_HAVE_AVX2)
constexpr Table kAvx2{avx2::hamming, avx2::and_popcount, avx2::masked_sum};
#endif
#if defined(WSD_HAVE_NEON)
constexpr Table kNeon{neon::hamming, neon::and_popcount, neon::masked_sum};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(WSD_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(WSD_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa initial() {
  if (const char* env = std::getenv("WSD_ISA")) {
    const std::string want(env);
    for (auto isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == name(isa) && available(isa)) return isa;
    }
  }
  return best_available();
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{table_for(initial())};
  return t;
}

std::atomic<Isa>& current_isa() {
  static std::atomic<Isa> isa{initial()};
  return isa;
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(WSD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::neon:
#if defined(WSD_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_available() {
  if (available(Isa::avx2)) return Isa::avx2;
  if (available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active() { return current_isa().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("SIMD variant " + std::string(name(isa)) + " is not available");
  current().store(table_for(isa), std::memory_order_relaxed);
  current_isa().store(isa, std::memory_order_relaxed);
}

std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return current().load(std::memory_order_relaxed)->hamming(a, b);
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return current().load(std::memory_order_relaxed)->and_popcount(a, b);
}

double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights) {
  return current().load(std::memory_order_relaxed)->masked_sum(bits, weights);
}

}  // namespace wsd::simd
