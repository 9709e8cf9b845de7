#include "postsim/gf2.hpp"

#include <bit>
#include <string>

#include "postsim/errors.hpp"

namespace postsim {

int dot_mod2(BitVector a, BitVector b) noexcept { return std::popcount(a & b) & 1; }

std::string to_bitstring(BitVector v, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    if ((v >> (n - 1 - i)) & 1U) out[i] = '1';
  }
  return out;
}

BitVector parse_bitstring(std::string_view text) {
  if (text.empty() || text.size() > kMaxGf2Width) {
    throw Error(ErrorCode::ParseError, "bit-string must have 1.." + std::to_string(kMaxGf2Width) + " characters");
  }
  BitVector v = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorCode::ParseError, "invalid bit-string '" + std::string(text) + "'");
    v = (v << 1) | static_cast<BitVector>(c == '1');
  }
  return v;
}

Gf2System::Gf2System(std::size_t width) : width_(width) {
  if (width == 0 || width > kMaxGf2Width) {
    throw Error(ErrorCode::IndexOutOfRange, "GF(2) width " + std::to_string(width));
  }
}

bool Gf2System::add(BitVector row) {
  const BitVector mask = (BitVector{1} << width_) - 1;
  if (row & ~mask) throw Error(ErrorCode::IndexOutOfRange, "row wider than the system");
  rows_.push_back(row);

  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    if ((row >> pivot_bits_[i]) & 1U) row ^= pivots_[i];
  }
  if (row == 0) return false;

  const int lead = std::bit_width(row) - 1;
  for (BitVector& pivot : pivots_) {
    if ((pivot >> lead) & 1U) pivot ^= row;
  }
  pivots_.push_back(row);
  pivot_bits_.push_back(lead);
  return true;
}

Gf2Solution gf2_solve(const Gf2System& system) {
  const std::size_t n = system.width();
  if (system.rank() >= n) throw Error(ErrorCode::FullRank, "only the zero vector solves the system");

  BitVector pivot_mask = 0;
  for (int bit : system.pivot_bits()) pivot_mask |= BitVector{1} << bit;
  int free_bit = -1;
  for (std::size_t b = 0; b < n; ++b) {
    if (!((pivot_mask >> b) & 1U)) {
      free_bit = static_cast<int>(b);
      break;
    }
  }

  // Each reduced row reads pivot + (free bits) = 0, so a pivot variable is 1
  // exactly when its row touches the chosen free bit.
  BitVector v = BitVector{1} << free_bit;
  const auto& rows = system.reduced_rows();
  const auto& bits = system.pivot_bits();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if ((rows[i] >> free_bit) & 1U) v |= BitVector{1} << bits[i];
  }
  return Gf2Solution{v, system.rank() + 1 < n};
}

}  // namespace postsim
