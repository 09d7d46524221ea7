#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace adba {

/// Half-open index range [begin, end).
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Vector in {-1, +1}^N stored one bit per entry (+1 <-> bit set).
class SignDirection {
 public:
  SignDirection() = default;
  static SignDirection all_positive(std::size_t n);
  static SignDirection all_negative(std::size_t n);

  std::size_t size() const noexcept { return size_; }
  int operator[](std::size_t i) const;
  void set(std::size_t i, int sign);

  /// Negates every entry in range. Throws std::out_of_range past size().
  void flip(BlockRange range);

  /// Sum of entries, in [-N, N].
  long long sum() const noexcept;

  friend bool operator==(const SignDirection&, const SignDirection&) = default;

 private:
  SignDirection(std::size_t n, bool positive);

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Copy of d with the signs on range negated.
SignDirection flip_block(const SignDirection& d, BlockRange range);

/// Splits [0, n) into min(2^(depth+1), n) contiguous blocks with boundaries
/// floor(j * n / B); block sizes differ by at most one.
std::vector<BlockRange> partition_blocks(std::size_t n, unsigned depth);

/// Deepest useful block level: ceil(log2 n) - 1, or 0 when n == 1.
unsigned max_depth(std::size_t n);

}  // namespace adba
