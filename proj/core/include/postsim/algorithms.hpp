#pragma once

// Deutsch-Jozsa, Simon and Grover, evaluated at the level of their final
// states and read out with the argument-register observable sum_z z|z><z|.
// That observable is nondegenerate on the argument register, so every
// readout here gives the same answer under both semantics modes.

#include <cstddef>
#include <set>
#include <vector>

#include "postsim/gf2.hpp"
#include "postsim/hilbert.hpp"
#include "postsim/measurement.hpp"
#include "postsim/oracle.hpp"
#include "postsim/rng.hpp"

namespace postsim {

/// In-place unnormalized Walsh-Hadamard transform:
/// out[z] = sum_x (-1)^{x.z} in[x]. Size must be a power of two.
void walsh_hadamard(std::vector<double>& values);

/// Diagonal sum_z z|z><z| on the n-qubit argument register (dims {2^n}).
Observable argument_observable(std::size_t n);

// ------------------------------------------------------------ Deutsch-Jozsa

enum class DjVerdict { Constant, Balanced };
std::string_view to_string(DjVerdict verdict) noexcept;

/// Argument (x) ancilla over dims {2^n, 2}. The argument amplitude of |z> is
/// 2^-n sum_x (-1)^{x.z + f(x)}; the ancilla is (|0> - |1>)/sqrt(2).
/// Throws InvalidOracle for a non-DJ oracle.
StateVector dj_final_state(const BooleanOracle& oracle);

struct DjResult {
  DjVerdict verdict = DjVerdict::Constant;
  BitVector measured = 0;
  /// Exact Born probability of z = 0.
  double probability_zero = 0.0;
  MeasurementOutcome measurement;
};

DjResult deutsch_jozsa(const BooleanOracle& oracle, SemanticsMode mode, Rng& rng);

// ------------------------------------------------------------------- Simon

/// (1/2^n) sum_k sum_j (-1)^{j.k} |j> (x) |f(k)> over dims {2^n, 2^n}.
/// Throws InvalidOracle for a non-Simon oracle.
StateVector simon_final_state(const BooleanOracle& oracle);

/// Exact Born distribution of the argument register of the Simon state.
std::vector<double> simon_distribution(const BooleanOracle& oracle);

struct SimonResult {
  BitVector recovered = 0;
  std::vector<BitVector> samples;
  std::size_t rank = 0;
};

/// Samples the argument register until the constraints have rank n-1, then
/// solves for the period. Throws RankDeficient when max_samples runs out.
SimonResult simon(const BooleanOracle& oracle, SemanticsMode mode, Rng& rng, std::size_t max_samples);

// ------------------------------------------------------------------ Grover

/// floor((pi/4) sqrt(2^n / marked)).
std::size_t grover_iterations(std::size_t n, std::size_t marked);

/// sin^2((2k+1) asin(sqrt(marked / 2^n))).
double grover_closed_form(std::size_t n, std::size_t marked, std::size_t iterations);

/// Uniform start, `iterations` rounds of phase flip + inversion about the
/// mean. Throws InvalidMarkedSet.
StateVector grover_state(std::size_t n, const std::set<std::size_t>& marked, std::size_t iterations);

struct GroverResult {
  std::size_t found = 0;
  bool found_marked = false;
  std::size_t iterations = 0;
  /// Exact Born probability of the marked set.
  double success_probability = 0.0;
  MeasurementOutcome measurement;
};

GroverResult grover(std::size_t n, const std::set<std::size_t>& marked, SemanticsMode mode, Rng& rng);

}  // namespace postsim
