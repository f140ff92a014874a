#pragma once

// Bit-vector kernels behind the learners: Hamming distance (nearest
// neighbor), AND-popcount (decision-tree split counts) and masked sums
// (Naive Bayes log-likelihoods). Each has a scalar reference and SIMD
// variants chosen at runtime; all variants return bit-identical results.

#include <cstdint>
#include <span>
#include <string_view>

namespace wsd::simd {

enum class Isa { scalar, avx2, neon };

std::string_view name(Isa isa);
bool available(Isa isa);
Isa best_available();

/// The variant used by the dispatching entry points. Defaults to
/// best_available(), or to the value of WSD_ISA (scalar|avx2|neon) when set.
Isa active();
/// Throws std::invalid_argument when the variant is not available here.
void set_active(Isa isa);

// Inputs a and b must have equal length.
std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Σ weights[i] over the set bits i < weights.size(). bits must hold at
/// least weights.size() bits. Element i is accumulated into lane i % 4 and
/// the lanes are reduced as (l0 + l1) + (l2 + l3), so every variant rounds
/// identically.
double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights);

namespace scalar {
std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights);
}  // namespace scalar

namespace avx2 {
std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights);
}  // namespace avx2

namespace neon {
std::uint64_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
double masked_sum(std::span<const std::uint64_t> bits, std::span<const double> weights);
}  // namespace neon

}  // namespace wsd::simd
