#pragma once

// Boolean oracles given as explicit truth tables over all 2^n inputs.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "postsim/gf2.hpp"
#include "postsim/rng.hpp"

namespace postsim {

enum class OracleClass { DeutschJozsa, Simon };

/// Largest argument width for any oracle (the Simon composite is 2n qubits).
inline constexpr std::size_t kMaxOracleWidth = 12;

class BooleanOracle {
 public:
  /// f: {0,1}^n -> {0,1}, constant or balanced. Throws InvalidOracle.
  static BooleanOracle deutsch_jozsa(std::size_t n, std::vector<BitVector> table);

  /// f: {0,1}^n -> {0,1}^n with f(x) = f(y) iff y = x xor s, s != 0.
  /// Without `period` the period is inferred from f(0) and then checked.
  /// Throws InvalidOracle.
  static BooleanOracle simon(std::size_t n, std::vector<BitVector> table,
                             std::optional<BitVector> period = std::nullopt);

  static BooleanOracle constant(std::size_t n, BitVector value);
  static BooleanOracle random_balanced(std::size_t n, Rng& rng);
  /// Random 2-to-1 function with the given period; outputs are distinct
  /// random n-bit labels per coset.
  static BooleanOracle random_simon(std::size_t n, BitVector period, Rng& rng);

  [[nodiscard]] OracleClass kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t width() const noexcept { return n_; }
  [[nodiscard]] std::size_t domain_size() const noexcept { return table_.size(); }
  [[nodiscard]] const std::vector<BitVector>& table() const noexcept { return table_; }
  [[nodiscard]] BitVector operator()(BitVector x) const { return table_.at(x); }

  /// DJ only.
  [[nodiscard]] bool is_constant() const noexcept { return constant_; }
  /// Simon only.
  [[nodiscard]] BitVector period() const noexcept { return period_; }

 private:
  BooleanOracle(OracleClass kind, std::size_t n, std::vector<BitVector> table);

  OracleClass kind_;
  std::size_t n_;
  std::vector<BitVector> table_;
  bool constant_ = false;
  BitVector period_ = 0;
};

/// One "input output" pair per line, both as bit-strings; '#' starts a
/// comment and blank lines are skipped. Every one of the 2^n inputs must
/// appear exactly once. Throws ParseError.
struct TruthTable {
  std::size_t n = 0;
  std::size_t output_width = 0;
  std::vector<BitVector> table;
};
TruthTable parse_truth_table(std::istream& in);
TruthTable load_truth_table(const std::string& path);

void write_truth_table(std::ostream& out, const BooleanOracle& oracle);

}  // namespace postsim
