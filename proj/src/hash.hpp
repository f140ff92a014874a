#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wsd {

// FNV-1a, 64-bit. Used for content identifiers, never for security.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (unsigned char c : data) h = (h ^ c) * 0x100000001B3ULL;
  return h;
}

inline std::string hex64(std::uint64_t h) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kHex[(h >> shift) & 0xF]);
  return out;
}

}  // namespace wsd
