#include "postsim/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

void require_width(std::size_t n) {
  if (n == 0 || n > kMaxOracleWidth) {
    throw Error(ErrorCode::InvalidOracle, "oracle width must be 1.." + std::to_string(kMaxOracleWidth) +
                                              ", got " + std::to_string(n));
  }
}

void require_table_size(std::size_t n, const std::vector<BitVector>& table) {
  if (table.size() != (std::size_t{1} << n)) {
    throw Error(ErrorCode::InvalidOracle, "truth table has " + std::to_string(table.size()) + " rows, expected " +
                                              std::to_string(std::size_t{1} << n));
  }
}

}  // namespace

BooleanOracle::BooleanOracle(OracleClass kind, std::size_t n, std::vector<BitVector> table)
    : kind_(kind), n_(n), table_(std::move(table)) {}

BooleanOracle BooleanOracle::deutsch_jozsa(std::size_t n, std::vector<BitVector> table) {
  require_width(n);
  require_table_size(n, table);
  std::size_t ones = 0;
  for (BitVector v : table) {
    if (v > 1) throw Error(ErrorCode::InvalidOracle, "Deutsch-Jozsa outputs must be single bits");
    ones += v;
  }
  const bool constant = ones == 0 || ones == table.size();
  if (!constant && ones * 2 != table.size()) {
    throw Error(ErrorCode::InvalidOracle, "function is neither constant nor balanced (" + std::to_string(ones) +
                                              " ones of " + std::to_string(table.size()) + ")");
  }
  BooleanOracle oracle(OracleClass::DeutschJozsa, n, std::move(table));
  oracle.constant_ = constant;
  return oracle;
}

BooleanOracle BooleanOracle::simon(std::size_t n, std::vector<BitVector> table, std::optional<BitVector> period) {
  require_width(n);
  require_table_size(n, table);
  const BitVector mask = (BitVector{1} << n) - 1;
  for (BitVector v : table) {
    if (v & ~mask) throw Error(ErrorCode::InvalidOracle, "Simon outputs must fit in n bits");
  }
  BitVector s = 0;
  if (period) {
    s = *period;
  } else {
    for (BitVector x = 1; x <= mask; ++x) {
      if (table[x] == table[0]) {
        s = x;
        break;
      }
    }
  }
  if (s == 0 || (s & ~mask)) throw Error(ErrorCode::InvalidOracle, "Simon period must be a nonzero n-bit string");

  // f(x) = f(y) iff y = x xor s  <=>  each output value has exactly the
  // preimage {x, x xor s}.
  std::unordered_map<BitVector, std::size_t> count;
  for (BitVector x = 0; x <= mask; ++x) {
    if (table[x] != table[x ^ s]) {
      throw Error(ErrorCode::InvalidOracle, "f(" + to_bitstring(x, n) + ") != f(" + to_bitstring(x ^ s, n) +
                                                ") for period " + to_bitstring(s, n));
    }
    ++count[table[x]];
  }
  for (const auto& [value, hits] : count) {
    if (hits != 2) {
      throw Error(ErrorCode::InvalidOracle, "output " + to_bitstring(value, n) + " has " + std::to_string(hits) +
                                                " preimages; expected 2");
    }
  }
  BooleanOracle oracle(OracleClass::Simon, n, std::move(table));
  oracle.period_ = s;
  return oracle;
}

BooleanOracle BooleanOracle::constant(std::size_t n, BitVector value) {
  require_width(n);
  return deutsch_jozsa(n, std::vector<BitVector>(std::size_t{1} << n, value));
}

BooleanOracle BooleanOracle::random_balanced(std::size_t n, Rng& rng) {
  require_width(n);
  const std::size_t size = std::size_t{1} << n;
  std::vector<BitVector> table(size, 0);
  std::fill(table.begin() + static_cast<std::ptrdiff_t>(size / 2), table.end(), 1);
  // Fisher-Yates with the library's own bounded draw keeps results portable.
  for (std::size_t i = size - 1; i > 0; --i) std::swap(table[i], table[rng.below(i + 1)]);
  return deutsch_jozsa(n, std::move(table));
}

BooleanOracle BooleanOracle::random_simon(std::size_t n, BitVector period, Rng& rng) {
  require_width(n);
  const std::size_t size = std::size_t{1} << n;
  if (period == 0 || period >= size) throw Error(ErrorCode::InvalidOracle, "Simon period must be a nonzero n-bit string");

  std::vector<BitVector> labels(size);
  std::iota(labels.begin(), labels.end(), BitVector{0});
  for (std::size_t i = size - 1; i > 0; --i) std::swap(labels[i], labels[rng.below(i + 1)]);

  std::vector<BitVector> table(size);
  std::vector<bool> assigned(size, false);
  std::size_t next_label = 0;
  for (BitVector x = 0; x < size; ++x) {
    if (assigned[x]) continue;
    table[x] = table[x ^ period] = labels[next_label++];
    assigned[x] = assigned[x ^ period] = true;
  }
  return simon(n, std::move(table), period);
}

TruthTable parse_truth_table(std::istream& in) {
  TruthTable result;
  std::vector<std::pair<BitVector, BitVector>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string input;
    std::string output;
    if (!(fields >> input)) continue;
    std::string extra;
    if (!(fields >> output) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'input output'");
    }
    if (result.n == 0) {
      result.n = input.size();
      result.output_width = output.size();
    } else if (input.size() != result.n || output.size() != result.output_width) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": inconsistent bit-string width");
    }
    if (result.n > kMaxOracleWidth) {
      throw Error(ErrorCode::ParseError, "input width " + std::to_string(result.n) + " exceeds " +
                                             std::to_string(kMaxOracleWidth));
    }
    try {
      rows.emplace_back(parse_bitstring(input), parse_bitstring(output));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty truth table");

  const std::size_t size = std::size_t{1} << result.n;
  result.table.assign(size, 0);
  std::vector<bool> seen(size, false);
  for (const auto& [x, y] : rows) {
    if (seen[x]) throw Error(ErrorCode::ParseError, "input " + to_bitstring(x, result.n) + " listed twice");
    seen[x] = true;
    result.table[x] = y;
  }
  if (rows.size() != size) {
    throw Error(ErrorCode::ParseError, "truth table covers " + std::to_string(rows.size()) + " of " +
                                           std::to_string(size) + " inputs");
  }
  return result;
}

TruthTable load_truth_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open oracle file '" + path + "'");
  return parse_truth_table(in);
}

void write_truth_table(std::ostream& out, const BooleanOracle& oracle) {
  const std::size_t out_width = oracle.kind() == OracleClass::DeutschJozsa ? 1 : oracle.width();
  for (BitVector x = 0; x < oracle.domain_size(); ++x) {
    out << to_bitstring(x, oracle.width()) << ' ' << to_bitstring(oracle(x), out_width) << '\n';
  }
}

}  // namespace postsim
