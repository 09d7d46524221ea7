#include "adba/sign_direction.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace adba {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

}  // namespace

SignDirection::SignDirection(std::size_t n, bool positive)
    : size_(n), words_(word_count(n), positive ? ~std::uint64_t{0} : 0) {
  // Keep padding bits clear so defaulted equality compares only real entries.
  if (positive && n % kWordBits != 0) {
    words_.back() &= (std::uint64_t{1} << (n % kWordBits)) - 1;
  }
}

SignDirection SignDirection::all_positive(std::size_t n) {
  return SignDirection(n, true);
}

SignDirection SignDirection::all_negative(std::size_t n) {
  return SignDirection(n, false);
}

int SignDirection::operator[](std::size_t i) const {
  if (i >= size_) throw std::out_of_range("sign index " + std::to_string(i));
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U ? 1 : -1;
}

void SignDirection::set(std::size_t i, int sign) {
  if (i >= size_) throw std::out_of_range("sign index " + std::to_string(i));
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (sign > 0) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

void SignDirection::flip(BlockRange range) {
  if (range.begin > range.end || range.end > size_) {
    throw std::out_of_range("block [" + std::to_string(range.begin) + ", " +
                            std::to_string(range.end) + ") outside direction of size " +
                            std::to_string(size_));
  }
  std::size_t i = range.begin;
  while (i < range.end) {
    const std::size_t word = i / kWordBits;
    const std::size_t offset = i % kWordBits;
    const std::size_t span = std::min(kWordBits - offset, range.end - i);
    const std::uint64_t mask =
        span == kWordBits ? ~std::uint64_t{0} : ((std::uint64_t{1} << span) - 1) << offset;
    words_[word] ^= mask;
    i += span;
  }
}

long long SignDirection::sum() const noexcept {
  long long positives = 0;
  for (std::uint64_t w : words_) positives += std::popcount(w);
  return 2 * positives - static_cast<long long>(size_);
}

SignDirection flip_block(const SignDirection& d, BlockRange range) {
  SignDirection out = d;
  out.flip(range);
  return out;
}

std::vector<BlockRange> partition_blocks(std::size_t n, unsigned depth) {
  if (n == 0) throw std::invalid_argument("partition of empty dimension");
  if (depth >= 63) throw std::invalid_argument("block depth too large");
  const std::size_t wanted = std::size_t{1} << (depth + 1);
  if (wanted > 2 * n) throw std::invalid_argument("block depth exceeds dimension");
  const std::size_t blocks = std::min(wanted, n);
  std::vector<BlockRange> out;
  out.reserve(blocks);
  for (std::size_t j = 0; j < blocks; ++j) {
    out.push_back({j * n / blocks, (j + 1) * n / blocks});
  }
  return out;
}

unsigned max_depth(std::size_t n) {
  if (n <= 1) return 0;
  // ceil(log2 n) == bit width of n - 1.
  return static_cast<unsigned>(std::bit_width(n - 1)) - 1;
}

}  // namespace adba
