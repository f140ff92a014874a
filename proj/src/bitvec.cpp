#include "wsd/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace wsd {

std::size_t BitVector::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void BitVector::and_with(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector::and_with: size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
}

void BitVector::and_not_with(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector::and_not_with: size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
}

std::string BitVector::to_hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(words_.size() * 16);
  for (auto w : words_) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kHex[(w >> shift) & 0xF]);
  }
  return out;
}

BitVector BitVector::from_hex(std::size_t size, const std::string& hex) {
  BitVector v(size);
  if (hex.size() != v.words_.size() * 16) throw std::invalid_argument("BitVector::from_hex: length mismatch");
  for (std::size_t w = 0; w < v.words_.size(); ++w) {
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      char c = hex[w * 16 + k];
      int d = c >= '0' && c <= '9' ? c - '0' : c >= 'a' && c <= 'f' ? c - 'a' + 10 : -1;
      if (d < 0) throw std::invalid_argument("BitVector::from_hex: bad digit");
      word = (word << 4) | static_cast<std::uint64_t>(d);
    }
    v.words_[w] = word;
  }
  if (size % 64 != 0 && !v.words_.empty() && (v.words_.back() >> (size % 64)) != 0) {
    throw std::invalid_argument("BitVector::from_hex: bits set past the end");
  }
  return v;
}

}  // namespace wsd
