#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "postsim/algorithms.hpp"
#include "postsim/errors.hpp"
#include "postsim/gf2.hpp"
#include "postsim/oracle.hpp"
#include "postsim/rng.hpp"

#ifndef POSTSIM_VERSION
#define POSTSIM_VERSION "0.0.0"
#endif

namespace postsim::cli {

namespace {

// Stream id reserved for oracle generation; trials use ids 0..trials-1.
constexpr std::uint64_t kOracleStream = std::numeric_limits<std::uint64_t>::max();

double relative_frequency(std::size_t count, std::uint64_t trials) {
  return static_cast<double>(count) / static_cast<double>(trials);
}

std::string format_value(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

RunReport make_report(const RunConfig& config) {
  if (config.trials == 0) throw Error(ErrorCode::ParseError, "trials must be positive");
  RunReport report;
  report.version = version_string();
  report.config = config;
  return report;
}

StateVector normalized_input(CVector amplitudes, Dims dims, std::vector<std::string>& warnings) {
  const double norm = amplitudes.norm();
  if (!(norm > kNormTol) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NotNormalized, "input state is zero or not finite");
  }
  if (std::abs(norm - 1.0) > 1e-6) {
    warnings.push_back("input state renormalized (norm was " + format_value(norm) + ")");
  }
  return StateVector::normalized(std::move(amplitudes), std::move(dims));
}

// ---------------------------------------------------------------- teleport

RunReport run_teleport(const RunConfig& config) {
  RunReport report = make_report(config);
  CVector in(2);
  in << config.alpha, config.beta;
  const StateVector psi = normalized_input(std::move(in), {2}, report.warnings);

  const Observable bell = lifted_bell_observable();
  const StateVector initial = teleport_initial_state(psi);
  for (BellKind kind : kBellKinds) {
    report.born_probabilities[std::string(to_string(kind))] =
        born_probability(bell, static_cast<std::size_t>(kind), initial);
  }

  const Rng root(config.seed);
  std::map<std::string, std::size_t> counts;
  for (BellKind kind : kBellKinds) counts[std::string(to_string(kind))] = 0;
  double min_fidelity = 1.0;
  std::size_t blocked_trials = 0;

  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = root.split(t);
    const TeleportResult result = teleport(psi, config.mode, rng);
    const std::string label(to_string(result.outcome_kind));
    ++counts[label];
    TrialRecord record{
        .trial = t,
        .outcome = label,
        .eigenvalue = result.measurement.eigenvalue,
        .probability = result.outcome_probability,
        .determined = result.measurement.determined,
        .fidelity = result.fidelity,
        .detail = "bits=" + std::string(result.classical_bits) +
                  " correction=" + std::string(to_string(result.correction)),
    };
    if (result.blocked) {
      ++blocked_trials;
      report.blocked = result.blocked;
    } else {
      min_fidelity = std::min(min_fidelity, *result.fidelity);
    }
    report.outcomes.push_back(std::move(record));
  }
  for (const auto& [label, count] : counts) report.frequencies[label] = relative_frequency(count, config.trials);

  if (blocked_trials > 0) {
    report.verdict = "blocked-by-degeneracy";
    report.exit_code = kExitBlocked;
  } else {
    report.metrics["min_fidelity"] = min_fidelity;
    report.verdict = min_fidelity >= 1.0 - 1e-10 ? "teleported" : "fidelity-below-tolerance";
  }
  return report;
}

// ---------------------------------------------------------------------- dj

BooleanOracle dj_oracle(const RunConfig& config) {
  if (config.oracle) {
    const TruthTable table = load_truth_table(*config.oracle);
    if (config.n && *config.n != table.n) {
      throw Error(ErrorCode::InvalidOracle, "--n does not match the oracle file width");
    }
    if (table.output_width != 1) throw Error(ErrorCode::InvalidOracle, "Deutsch-Jozsa oracle outputs must be 1 bit");
    return BooleanOracle::deutsch_jozsa(table.n, table.table);
  }
  if (!config.n || !config.function) {
    throw Error(ErrorCode::ParseError, "dj needs --oracle FILE or both --n and --function");
  }
  if (*config.function == "constant0") return BooleanOracle::constant(*config.n, 0);
  if (*config.function == "constant1") return BooleanOracle::constant(*config.n, 1);
  if (*config.function == "balanced") {
    Rng rng = Rng(config.seed).split(kOracleStream);
    return BooleanOracle::random_balanced(*config.n, rng);
  }
  throw Error(ErrorCode::ParseError, "unknown --function '" + *config.function + "'");
}

RunReport run_dj(const RunConfig& config) {
  RunReport report = make_report(config);
  const BooleanOracle oracle = dj_oracle(config);
  const std::size_t n = oracle.width();
  report.results["oracle_class"] = oracle.is_constant() ? "constant" : "balanced";

  const Rng root(config.seed);
  std::map<std::string, std::size_t> counts;
  double p_zero = 0.0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = root.split(t);
    const DjResult result = deutsch_jozsa(oracle, config.mode, rng);
    p_zero = result.probability_zero;
    const std::string verdict(to_string(result.verdict));
    ++counts[verdict];
    report.outcomes.push_back(TrialRecord{
        .trial = t,
        .outcome = to_bitstring(result.measured, n),
        .eigenvalue = result.measurement.eigenvalue,
        .probability = result.measurement.probability,
        .determined = result.measurement.subsystem_state.has_value(),
        .fidelity = std::nullopt,
        .detail = verdict,
    });
  }
  for (const auto& [label, count] : counts) report.frequencies[label] = relative_frequency(count, config.trials);
  report.born_probabilities["constant"] = p_zero;
  report.born_probabilities["balanced"] = 1.0 - p_zero;
  report.verdict = counts.size() == 1 ? counts.begin()->first : "inconsistent";
  return report;
}

// ------------------------------------------------------------------- simon

BooleanOracle simon_oracle(const RunConfig& config) {
  if (config.oracle) {
    const TruthTable table = load_truth_table(*config.oracle);
    if (config.n && *config.n != table.n) {
      throw Error(ErrorCode::InvalidOracle, "--n does not match the oracle file width");
    }
    if (table.output_width != table.n) {
      throw Error(ErrorCode::InvalidOracle, "Simon oracle outputs must be n bits wide");
    }
    std::optional<BitVector> period;
    if (config.secret) period = parse_bitstring(*config.secret);
    return BooleanOracle::simon(table.n, table.table, period);
  }
  if (!config.secret) throw Error(ErrorCode::ParseError, "simon needs --oracle FILE or --secret BITS");
  const std::size_t n = config.secret->size();
  if (config.n && *config.n != n) throw Error(ErrorCode::InvalidOracle, "--n does not match the --secret width");
  Rng rng = Rng(config.seed).split(kOracleStream);
  return BooleanOracle::random_simon(n, parse_bitstring(*config.secret), rng);
}

RunReport run_simon(const RunConfig& config) {
  RunReport report = make_report(config);
  const BooleanOracle oracle = simon_oracle(config);
  const std::size_t n = oracle.width();
  const std::string period = to_bitstring(oracle.period(), n);
  report.results["period"] = period;

  const std::vector<double> distribution = simon_distribution(oracle);
  for (std::size_t j = 0; j < distribution.size(); ++j) {
    if (distribution[j] >= kZeroProbability) report.born_probabilities["j=" + to_bitstring(j, n)] = distribution[j];
  }

  const Rng root(config.seed);
  std::map<std::string, std::size_t> counts;
  std::size_t total_samples = 0;
  std::size_t recovered_ok = 0;
  std::size_t rank_deficient = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = root.split(t);
    TrialRecord record;
    record.trial = t;
    try {
      const SimonResult result = simon(oracle, config.mode, rng, config.max_samples);
      record.outcome = to_bitstring(result.recovered, n);
      std::string samples;
      for (BitVector j : result.samples) samples += (samples.empty() ? "" : ",") + to_bitstring(j, n);
      record.detail = "samples=" + samples;
      total_samples += result.samples.size();
      if (result.recovered == oracle.period()) ++recovered_ok;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      record.outcome = "rank-deficient";
      record.determined = false;
      ++rank_deficient;
    }
    ++counts[record.outcome];
    report.outcomes.push_back(std::move(record));
  }
  for (const auto& [label, count] : counts) report.frequencies[label] = relative_frequency(count, config.trials);
  const std::uint64_t completed = config.trials - rank_deficient;
  report.metrics["mean_samples"] =
      completed > 0 ? static_cast<double>(total_samples) / static_cast<double>(completed) : 0.0;
  report.metrics["recovery_rate"] = relative_frequency(recovered_ok, config.trials);
  if (recovered_ok == config.trials) {
    report.verdict = "recovered";
    report.results["recovered"] = period;
  } else if (rank_deficient > 0) {
    report.verdict = "rank-deficient";
  } else {
    report.verdict = "mismatch";
  }
  return report;
}

// ------------------------------------------------------------------ grover

RunReport run_grover(const RunConfig& config) {
  RunReport report = make_report(config);
  if (!config.n) throw Error(ErrorCode::ParseError, "grover needs --n");
  const std::size_t n = *config.n;
  const std::set<std::size_t> marked(config.marked.begin(), config.marked.end());
  if (marked.size() != config.marked.size()) throw Error(ErrorCode::InvalidMarkedSet, "duplicate marked index");

  const Rng root(config.seed);
  std::map<std::string, std::size_t> counts;
  std::size_t hits = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = root.split(t);
    GroverResult result = grover(n, marked, config.mode, rng);
    const std::string label = to_bitstring(result.found, n);
    ++counts[label];
    hits += result.found_marked ? 1 : 0;
    report.outcomes.push_back(TrialRecord{
        .trial = t,
        .outcome = label,
        .eigenvalue = result.measurement.eigenvalue,
        .probability = result.measurement.probability,
        .determined = result.measurement.determined,
        .fidelity = std::nullopt,
        .detail = result.found_marked ? "marked" : "unmarked",
    });
    if (t + 1 == config.trials) {
      report.metrics["iterations"] = static_cast<double>(result.iterations);
      report.born_probabilities["marked"] = result.success_probability;
      report.metrics["closed_form"] = grover_closed_form(n, marked.size(), result.iterations);
    }
  }
  for (const auto& [label, count] : counts) report.frequencies[label] = relative_frequency(count, config.trials);
  report.metrics["success_rate"] = relative_frequency(hits, config.trials);
  report.verdict = "completed";
  return report;
}

// ----------------------------------------------------------------- measure

CMatrix pauli(const std::string& label) {
  CMatrix m(2, 2);
  if (label == "I") {
    m << 1, 0, 0, 1;
  } else if (label == "X") {
    m << 0, 1, 1, 0;
  } else if (label == "Y") {
    m << 0, Complex(0, -1), Complex(0, 1), 0;
  } else if (label == "Z") {
    m << 1, 0, 0, -1;
  } else {
    throw Error(ErrorCode::ParseError, "unknown Pauli factor '" + label + "' (expected I, X, Y or Z)");
  }
  return m;
}

RunReport run_measure(const RunConfig& config) {
  RunReport report = make_report(config);
  if (!config.observable || !config.state) {
    throw Error(ErrorCode::ParseError, "measure needs --observable and --state");
  }
  CMatrix matrix(1, 1);
  matrix(0, 0) = 1.0;
  std::size_t qubits = 0;
  for (const std::string& factor : split(*config.observable, ',')) {
    std::string label = trim(factor);
    std::transform(label.begin(), label.end(), label.begin(), [](unsigned char c) { return std::toupper(c); });
    matrix = kron(matrix, pauli(label));
    ++qubits;
  }
  const Observable observable(std::move(matrix), qubit_dims(qubits));

  const std::vector<std::string> parts = split(*config.state, ';');
  if (parts.size() != observable.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "--state has " + std::to_string(parts.size()) +
                                                  " amplitudes; the observable needs " +
                                                  std::to_string(observable.dimension()));
  }
  CVector amplitudes(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) amplitudes(static_cast<Eigen::Index>(i)) = parse_complex(parts[i]);
  const StateVector psi = normalized_input(std::move(amplitudes), qubit_dims(qubits), report.warnings);

  const std::vector<double> born = born_distribution(observable, psi);
  for (std::size_t i = 0; i < born.size(); ++i) {
    report.born_probabilities[format_value(observable.spectrum().eigenvalues[i])] = born[i];
  }

  const Rng root(config.seed);
  std::map<std::string, std::size_t> counts;
  std::size_t undetermined = 0;
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    Rng rng = root.split(t);
    const MeasurementOutcome outcome = measure(observable, psi, config.mode, rng);
    const std::string label = format_value(outcome.eigenvalue);
    ++counts[label];
    if (!outcome.determined) ++undetermined;
    report.outcomes.push_back(TrialRecord{
        .trial = t,
        .outcome = label,
        .eigenvalue = outcome.eigenvalue,
        .probability = outcome.probability,
        .determined = outcome.determined,
        .fidelity = std::nullopt,
        .detail = "rank=" + std::to_string(outcome.eigenprojector.rank()),
    });
  }
  for (const auto& [label, count] : counts) report.frequencies[label] = relative_frequency(count, config.trials);
  if (undetermined > 0) {
    report.blocked = degeneracy_report(observable);
    report.verdict = "blocked-by-degeneracy";
    report.exit_code = kExitBlocked;
  } else {
    report.verdict = "determined";
  }
  return report;
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::Teleport: return "teleport";
    case Command::Dj: return "dj";
    case Command::Simon: return "simon";
    case Command::Grover: return "grover";
    case Command::Measure: return "measure";
  }
  return "unknown";
}

Command parse_command(std::string_view text) {
  for (Command c : {Command::Teleport, Command::Dj, Command::Simon, Command::Grover, Command::Measure}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorCode::ParseError, "unknown command '" + std::string(text) + "'");
}

Complex parse_complex(std::string_view text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorCode::ParseError, "expected 're,im', got '" + std::string(text) + "'");
  double values[2];
  for (std::size_t i = 0; i < 2; ++i) {
    const std::string field = trim(parts[i]);
    std::size_t used = 0;
    try {
      values[i] = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (field.empty() || used != field.size() || !std::isfinite(values[i])) {
      throw Error(ErrorCode::ParseError, "bad number '" + field + "' in '" + std::string(text) + "'");
    }
  }
  return {values[0], values[1]};
}

std::string version_string() { return POSTSIM_VERSION; }

RunReport run(const RunConfig& config) {
  switch (config.command) {
    case Command::Teleport: return run_teleport(config);
    case Command::Dj: return run_dj(config);
    case Command::Simon: return run_simon(config);
    case Command::Grover: return run_grover(config);
    case Command::Measure: return run_measure(config);
  }
  throw Error(ErrorCode::ParseError, "unknown command");
}

}  // namespace postsim::cli
