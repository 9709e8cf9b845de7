#pragma once

// Linear algebra over GF(2) for Simon post-processing. Bit-vectors are packed
// into a std::uint64_t with bit (n-1-i) holding the i-th character of the
// printed bit-string, so "10" over n = 2 is the integer 2.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace postsim {

using BitVector = std::uint64_t;

inline constexpr std::size_t kMaxGf2Width = 63;

/// Bitwise inner product mod 2.
int dot_mod2(BitVector a, BitVector b) noexcept;

/// n-character '0'/'1' string, most significant bit first.
std::string to_bitstring(BitVector v, std::size_t n);
/// Throws ParseError on characters other than 0/1 or an empty/overlong string.
BitVector parse_bitstring(std::string_view text);

class Gf2System {
 public:
  /// Throws IndexOutOfRange for width 0 or above kMaxGf2Width.
  explicit Gf2System(std::size_t width);

  /// Adds a constraint row.v = 0. Returns true when the rank grew.
  bool add(BitVector row);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t rank() const noexcept { return pivots_.size(); }
  [[nodiscard]] const std::vector<BitVector>& rows() const noexcept { return rows_; }
  [[nodiscard]] const std::vector<BitVector>& reduced_rows() const noexcept { return pivots_; }
  [[nodiscard]] const std::vector<int>& pivot_bits() const noexcept { return pivot_bits_; }

 private:
  std::size_t width_;
  std::vector<BitVector> rows_;
  // Reduced echelon form: pivots_[i] leads with bit pivot_bits_[i] and no
  // other reduced row has that bit set.
  std::vector<BitVector> pivots_;
  std::vector<int> pivot_bits_;
};

struct Gf2Solution {
  BitVector vector = 0;
  /// True when rank < width - 1, i.e. the nullspace holds more than one
  /// nonzero vector and `vector` is just one of them.
  bool ambiguous = false;
};

/// Nonzero v with row.v = 0 for every row. The free bit with the lowest
/// significance is set and the pivots follow from it. Throws FullRank when
/// only v = 0 solves the system.
Gf2Solution gf2_solve(const Gf2System& system);

}  // namespace postsim
