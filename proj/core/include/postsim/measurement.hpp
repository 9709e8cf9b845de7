#pragma once

// Measurement semantics engine.
//
// Born probabilities come from the resolution of identity of an observable:
// P(lambda_i) = ||P_i psi||^2. What a measurement leaves behind depends on the
// semantics mode:
//
//   Lueders          post-state = P_i psi / ||P_i psi||, always.
//   StrictVonNeumann post-state = the eigenvector when lambda_i is simple;
//                    no post-state at all when its eigenspace has rank > 1.
//
// Refinements (A = f(C), C nondegenerate and commuting with A) are built and
// validated here but never executed as a separate protocol.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postsim/hilbert.hpp"
#include "postsim/rng.hpp"

namespace postsim {

enum class SemanticsMode { StrictVonNeumann, Lueders };

/// "von-neumann" / "lueders".
std::string_view to_string(SemanticsMode mode) noexcept;
/// Throws ParseError for anything else.
SemanticsMode parse_semantics_mode(std::string_view text);

inline constexpr SemanticsMode kAllModes[] = {SemanticsMode::StrictVonNeumann, SemanticsMode::Lueders};

/// Born probabilities below this are treated as exact zeros when sampling.
inline constexpr double kZeroProbability = 1e-12;

struct MeasurementOutcome {
  std::size_t index = 0;  // position in the observable's ascending spectrum
  double eigenvalue = 0.0;
  double probability = 0.0;
  bool determined = false;
  std::optional<StateVector> post_state;
  Projector eigenprojector;
  /// What Lueders semantics would have produced; set only for undetermined
  /// outcomes so reports can contrast the two rules.
  std::optional<StateVector> lueders_state;
  /// Partial measurements only: the measured subsystem's eigenstate.
  std::optional<StateVector> subsystem_state;
};

/// ||P_i psi||^2. Throws DimensionMismatch or IndexOutOfRange.
double born_probability(const Observable& a, std::size_t eigenvalue_index, const StateVector& psi);

/// Born probability of every eigenvalue, in spectrum order.
std::vector<double> born_distribution(const Observable& a, const StateVector& psi);

/// Samples an outcome index from a distribution, skipping entries below
/// kZeroProbability. Consumes exactly one uniform draw.
std::size_t sample_index(const std::vector<double>& probabilities, Rng& rng);

MeasurementOutcome measure(const Observable& a, const StateVector& psi, SemanticsMode mode, Rng& rng);

/// Deterministic branch selection for exhaustive testing. Throws
/// ZeroProbabilityBranch when the branch has (numerically) zero weight.
MeasurementOutcome measure_forced(const Observable& a, const StateVector& psi, SemanticsMode mode,
                                  std::size_t eigenvalue_index);

/// I (x) ... (x) a (x) ... (x) I with `a` at `subsystem`. The spectrum is
/// carried over structurally: every multiplicity is scaled by the dimension
/// of the complement. Throws IndexOutOfRange or DimensionMismatch.
Observable lift(const Observable& a, std::size_t subsystem, const Dims& dims);

/// Measures a locally nondegenerate observable on one subsystem of psi.
///
/// Probabilities follow the composite-space rule ||(E_j (x) I) psi||^2. The
/// outcome always reports the subsystem eigenstate |alpha_j>. The composite
/// post-state is the Lueders projection in Lueders mode; in strict mode it is
/// present only if the complement is one-dimensional. Throws
/// DegenerateLocalObservable, DimensionMismatch or IndexOutOfRange.
MeasurementOutcome partial_measure(const Observable& a, std::size_t subsystem, const StateVector& psi,
                                   SemanticsMode mode, Rng& rng);

MeasurementOutcome partial_measure_forced(const Observable& a, std::size_t subsystem, const StateVector& psi,
                                          SemanticsMode mode, std::size_t eigenvalue_index);

/// Born distribution of a local observable on one subsystem.
std::vector<double> partial_distribution(const Observable& a, std::size_t subsystem, const StateVector& psi);

/// A partial measurement with the components (<alpha_j| (x) I) psi already
/// contracted, so repeated sampling of the same prepared state is cheap.
class PartialMeasurement {
 public:
  PartialMeasurement(const Observable& a, std::size_t subsystem, const StateVector& psi);

  [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  [[nodiscard]] const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

  /// Throws IndexOutOfRange or ZeroProbabilityBranch.
  [[nodiscard]] MeasurementOutcome outcome(std::size_t eigenvalue_index, SemanticsMode mode) const;
  MeasurementOutcome sample(SemanticsMode mode, Rng& rng) const;

 private:
  std::vector<double> eigenvalues_;
  CMatrix local_basis_;  // column j = |alpha_j>; empty when basis_index_ is used
  std::vector<std::size_t> basis_index_;  // |alpha_j> = |basis_index_[j]>
  Dims dims_;
  std::size_t subsystem_;
  SubsystemLayout layout_;
  CMatrix components_;  // row j = (<alpha_j| (x) I) psi over (left, right)
  std::vector<double> probabilities_;
};

/// A nondegenerate observable C with A = f(C).
struct RefinementObservable {
  Observable refinement;
  /// value_map[k] = f(k): the A-eigenvalue assigned to C's eigenvalue k.
  std::vector<double> value_map;
};

/// Chooses an orthonormal basis inside each eigenspace of A (Gram-Schmidt
/// over the eigensolver's vectors, in order), assigns C the eigenvalues
/// 0..N-1 on that basis and records f. Throws NotHermitian.
RefinementObservable build_refinement(const Observable& a);

struct RefinementCheck {
  bool refinement_nondegenerate = false;
  double commutator_norm = 0.0;        // max |[A, C]| entrywise
  double reconstruction_error = 0.0;   // max |f(C) - A| entrywise
};

RefinementCheck check_refinement(const Observable& a, const RefinementObservable& r);

}  // namespace postsim
