#pragma once

// Command-line harness: run configurations and their JSON/text reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postsim/hilbert.hpp"
#include "postsim/measurement.hpp"
#include "postsim/protocols.hpp"

namespace postsim::cli {

inline constexpr std::string_view kSchema = "postulate-sim/1";

enum class Command { Teleport, Dj, Simon, Grover, Measure };

std::string_view to_string(Command command) noexcept;
Command parse_command(std::string_view text);

enum class ReportFormat { Json, Text };

struct RunConfig {
  Command command = Command::Teleport;
  SemanticsMode mode = SemanticsMode::Lueders;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::optional<std::size_t> n;
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};
  std::optional<std::string> oracle;
  /// dj: "constant0" | "constant1" | "balanced" when no oracle file is given.
  std::optional<std::string> function;
  /// simon: hidden period as a bit-string when no oracle file is given.
  std::optional<std::string> secret;
  std::size_t max_samples = 50;
  std::vector<std::size_t> marked;
  /// measure: comma-separated Pauli product, e.g. "Z,I".
  std::optional<std::string> observable;
  /// measure: ';'-separated "re,im" amplitudes.
  std::optional<std::string> state;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::string outcome;
  std::optional<double> eigenvalue;
  std::optional<double> probability;
  bool determined = true;
  std::optional<double> fidelity;
  std::optional<std::string> detail;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct RunReport {
  std::string schema{kSchema};
  std::string version;
  RunConfig config;
  std::vector<TrialRecord> outcomes;
  std::map<std::string, double> frequencies;
  std::map<std::string, double> born_probabilities;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> results;
  std::string verdict;
  std::optional<DegeneracyReport> blocked;
  std::vector<std::string> warnings;
  int exit_code = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Exit codes: 0 success, 1 usage or validation error, 2 blocked by a
/// degenerate measurement under strict semantics.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBlocked = 2;

/// Dispatches to the library. Per-trial randomness is Rng(seed).split(trial),
/// so the report is a pure function of the config. Throws postsim::Error on
/// invalid parameters.
RunReport run(const RunConfig& config);

std::string emit_report(const RunReport& report, ReportFormat format);
/// Inverse of emit_report(..., Json). Throws ParseError.
RunReport parse_report(std::string_view json);

/// "re,im" -> complex. Throws ParseError.
Complex parse_complex(std::string_view text);

/// The version string stamped into reports.
std::string version_string();

}  // namespace postsim::cli
