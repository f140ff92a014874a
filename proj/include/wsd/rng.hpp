#pragma once

// Portable random streams. std::mt19937_64 output is fixed by the standard;
// the distributions layered on top of it here are too, unlike the
// implementation-defined std::uniform_int_distribution.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace wsd {

inline constexpr std::string_view kRngName = "mt19937_64/splitmix64-streams";

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `stream` of a base seed; streams of one seed do not overlap in
  /// practice.
  static Rng stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw from [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace wsd
