#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace graphon_lab {

using Word = std::uint64_t;
constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

// Square bit matrix stored as packed rows of 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_(words_for(n)), bits_(n * words_for(n), 0) {}

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool test(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1u;
  }
  void set(std::size_t i, std::size_t j) {
    bits_[i * words_ + j / kWordBits] |= Word{1} << (j % kWordBits);
  }
  void set_symmetric(std::size_t i, std::size_t j) {
    set(i, j);
    set(j, i);
  }

  std::span<const Word> row(std::size_t i) const {
    return {bits_.data() + i * words_, words_};
  }
  std::span<Word> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }

  std::size_t row_count(std::size_t i) const {
    std::size_t c = 0;
    for (Word w : row(i)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

}  // namespace graphon_lab
