#include "postsim/algorithms.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

using Index = Eigen::Index;

Index as_index(std::size_t i) { return static_cast<Index>(i); }

std::size_t register_size(std::size_t n) {
  if (n == 0 || n > 12) throw Error(ErrorCode::DimensionTooLarge, "register width must be 1..12");
  return std::size_t{1} << n;
}

}  // namespace

void walsh_hadamard(std::vector<double>& values) {
  const std::size_t size = values.size();
  if (size == 0 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::DimensionMismatch, "Walsh-Hadamard length must be a power of two");
  }
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = values[i];
        const double b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
}

Observable argument_observable(std::size_t n) {
  const std::size_t size = register_size(n);
  // Dense at 4096 x 4096, so build each width once.
  static std::mutex mutex;
  static std::map<std::size_t, Observable> cache;
  const std::scoped_lock lock(mutex);
  if (const auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<double> labels(size);
  for (std::size_t z = 0; z < size; ++z) labels[z] = static_cast<double>(z);
  return cache.emplace(n, Observable::diagonal(labels, {size})).first->second;
}

// ------------------------------------------------------------ Deutsch-Jozsa

std::string_view to_string(DjVerdict verdict) noexcept {
  return verdict == DjVerdict::Constant ? "constant" : "balanced";
}

StateVector dj_final_state(const BooleanOracle& oracle) {
  if (oracle.kind() != OracleClass::DeutschJozsa) {
    throw Error(ErrorCode::InvalidOracle, "Deutsch-Jozsa needs a constant-or-balanced oracle");
  }
  const std::size_t size = register_size(oracle.width());
  std::vector<double> signs(size);
  for (std::size_t x = 0; x < size; ++x) signs[x] = oracle(x) ? -1.0 : 1.0;
  walsh_hadamard(signs);

  CVector argument(as_index(size));
  for (std::size_t z = 0; z < size; ++z) argument(as_index(z)) = signs[z] / static_cast<double>(size);
  CVector ancilla(2);
  ancilla << std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0;
  return StateVector(kron_vector(argument, ancilla), {size, 2});
}

DjResult deutsch_jozsa(const BooleanOracle& oracle, SemanticsMode mode, Rng& rng) {
  const StateVector state = dj_final_state(oracle);
  const PartialMeasurement readout(argument_observable(oracle.width()), 0, state);
  MeasurementOutcome outcome = readout.sample(mode, rng);
  const auto z = static_cast<BitVector>(std::llround(outcome.eigenvalue));
  return DjResult{
      .verdict = z == 0 ? DjVerdict::Constant : DjVerdict::Balanced,
      .measured = z,
      .probability_zero = readout.probabilities().front(),
      .measurement = std::move(outcome),
  };
}

// ------------------------------------------------------------------- Simon

StateVector simon_final_state(const BooleanOracle& oracle) {
  if (oracle.kind() != OracleClass::Simon) throw Error(ErrorCode::InvalidOracle, "Simon needs a 2-to-1 oracle");
  const std::size_t size = register_size(oracle.width());
  if (size * size > kMaxStateDimension) {
    throw Error(ErrorCode::DimensionTooLarge, "Simon composite exceeds the state size limit");
  }

  // Group inputs by output value; each group contributes one column |f(k)>.
  std::unordered_map<BitVector, std::vector<BitVector>> preimages;
  for (BitVector k = 0; k < size; ++k) preimages[oracle(k)].push_back(k);

  CVector amplitudes = CVector::Zero(as_index(size * size));
  std::vector<double> column(size);
  const double scale = 1.0 / static_cast<double>(size);
  for (const auto& [y, ks] : preimages) {
    std::fill(column.begin(), column.end(), 0.0);
    for (BitVector k : ks) column[k] = 1.0;
    walsh_hadamard(column);
    for (std::size_t j = 0; j < size; ++j) amplitudes(as_index(j * size + y)) = column[j] * scale;
  }
  return StateVector(std::move(amplitudes), {size, size});
}

std::vector<double> simon_distribution(const BooleanOracle& oracle) {
  return partial_distribution(argument_observable(oracle.width()), 0, simon_final_state(oracle));
}

SimonResult simon(const BooleanOracle& oracle, SemanticsMode mode, Rng& rng, std::size_t max_samples) {
  const std::size_t n = oracle.width();
  if (max_samples + 1 < n) {
    throw Error(ErrorCode::RankDeficient, "max_samples must be at least n - 1");
  }
  const PartialMeasurement readout(argument_observable(n), 0, simon_final_state(oracle));

  SimonResult result;
  Gf2System system(n);
  while (system.rank() + 1 < n) {
    if (result.samples.size() >= max_samples) {
      throw Error(ErrorCode::RankDeficient, "rank " + std::to_string(system.rank()) + " after " +
                                                std::to_string(max_samples) + " samples; need " +
                                                std::to_string(n - 1));
    }
    const MeasurementOutcome outcome = readout.sample(mode, rng);
    const auto j = static_cast<BitVector>(std::llround(outcome.eigenvalue));
    result.samples.push_back(j);
    system.add(j);
  }
  result.rank = system.rank();
  result.recovered = gf2_solve(system).vector;
  return result;
}

// ------------------------------------------------------------------ Grover

std::size_t grover_iterations(std::size_t n, std::size_t marked) {
  const double ratio = static_cast<double>(std::size_t{1} << n) / static_cast<double>(marked);
  return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio)));
}

double grover_closed_form(std::size_t n, std::size_t marked, std::size_t iterations) {
  const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(std::size_t{1} << n)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s;
}

StateVector grover_state(std::size_t n, const std::set<std::size_t>& marked, std::size_t iterations) {
  const std::size_t size = register_size(n);
  if (marked.empty() || marked.size() >= size || *marked.rbegin() >= size) {
    throw Error(ErrorCode::InvalidMarkedSet, "marked set must be a nonempty proper subset of 0.." +
                                                 std::to_string(size - 1));
  }
  std::vector<double> amp(size, 1.0 / std::sqrt(static_cast<double>(size)));
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t m : marked) amp[m] = -amp[m];
    double mean = 0.0;
    for (double a : amp) mean += a;
    mean /= static_cast<double>(size);
    for (double& a : amp) a = 2.0 * mean - a;
  }
  CVector v(as_index(size));
  for (std::size_t i = 0; i < size; ++i) v(as_index(i)) = amp[i];
  return StateVector::normalized(std::move(v), {size});
}

GroverResult grover(std::size_t n, const std::set<std::size_t>& marked, SemanticsMode mode, Rng& rng) {
  if (marked.empty()) throw Error(ErrorCode::InvalidMarkedSet, "marked set is empty");
  const std::size_t iterations = grover_iterations(n, marked.size());
  const StateVector state = grover_state(n, marked, iterations);

  double success = 0.0;
  for (std::size_t m : marked) success += std::norm(state[m]);

  MeasurementOutcome outcome = measure(argument_observable(n), state, mode, rng);
  const auto found = static_cast<std::size_t>(std::llround(outcome.eigenvalue));
  return GroverResult{
      .found = found,
      .found_marked = marked.contains(found),
      .iterations = iterations,
      .success_probability = success,
      .measurement = std::move(outcome),
  };
}

}  // namespace postsim
