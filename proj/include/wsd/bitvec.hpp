#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wsd {

/// Fixed-length bit sequence packed into 64-bit words, low bit first.
/// Bits past size() are always zero.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const auto mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  std::size_t count() const;

  // Word-wise combination with a vector of the same size.
  void and_with(const BitVector& other);
  void and_not_with(const BitVector& other);
  bool none() const { return count() == 0; }

  std::span<const std::uint64_t> words() const { return words_; }

  /// Hex digits of each word, lowest word first, for text serialization.
  std::string to_hex() const;
  static BitVector from_hex(std::size_t size, const std::string& hex);

  bool operator==(const BitVector&) const = default;

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace wsd
