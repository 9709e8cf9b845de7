#pragma once

// Single-qubit teleportation over a shared |Phi+> pair.
//
// Alice holds (psi_in, A); Bob holds B. Alice's Bell-basis measurement is the
// two-qubit Bell observable lifted to the three-qubit space, where each of its
// four eigenvalues has multiplicity 2. Under Lueders semantics the protocol
// succeeds; under strict von Neumann semantics the measurement leaves no
// post-state and the run is reported as blocked.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "postsim/hilbert.hpp"
#include "postsim/measurement.hpp"
#include "postsim/rng.hpp"

namespace postsim {

/// Declaration order is also the eigenvalue label (0..3) of the Bell
/// observable and the 2-bit classical message (00, 01, 10, 11).
enum class BellKind { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

inline constexpr std::array<BellKind, 4> kBellKinds = {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus,
                                                       BellKind::PsiMinus};

/// "phi+", "phi-", "psi+", "psi-".
std::string_view to_string(BellKind kind) noexcept;
/// Two-character classical message, e.g. "01" for PhiMinus.
std::string_view classical_bits(BellKind kind) noexcept;

enum class Correction { Identity, Sigma3, Sigma1, Sigma3Sigma1 };

/// "I", "sigma3", "sigma1", "sigma3*sigma1".
std::string_view to_string(Correction correction) noexcept;

StateVector bell_state(BellKind kind);

/// sum_k k |B_k><B_k| on Alice's two qubits (dims {2, 2}).
Observable bell_basis_observable();

/// The Bell observable on qubits (psi_in, A) of the three-qubit space.
Observable lifted_bell_observable();

Correction correction_for(BellKind kind) noexcept;
CMatrix correction_gate(BellKind kind);

struct DegeneracyReport {
  std::size_t dimension = 0;
  std::size_t distinct_eigenvalues = 0;
  std::vector<std::size_t> multiplicities;

  friend bool operator==(const DegeneracyReport&, const DegeneracyReport&) = default;
};

/// Describes the spectrum of a degenerate observable.
DegeneracyReport degeneracy_report(const Observable& a);

struct TeleportResult {
  BellKind outcome_kind = BellKind::PhiPlus;
  std::string_view classical_bits;
  double outcome_probability = 0.0;
  Correction correction = Correction::Identity;
  /// Absent when blocked: strict semantics leaves no three-qubit state to
  /// read Bob's qubit from.
  std::optional<StateVector> bob_state_before_correction;
  std::optional<StateVector> bob_state_after_correction;
  std::optional<DegeneracyReport> blocked;
  /// |<psi_in|bob_after>|^2; set only on success.
  std::optional<double> fidelity;
  /// Raw result of Alice's measurement (diagnostics included).
  MeasurementOutcome measurement;
};

/// psi_in (x) |Phi+> over dims {2, 2, 2}.
StateVector teleport_initial_state(const StateVector& psi_in);

/// The three-qubit state predicted by the Bell-basis expansion after outcome
/// `kind`: |B_kind> (x) U_kind^dagger psi_in, i.e. |Phi+>(a,b), |Phi->(a,-b),
/// |Psi+>(b,a), |Psi->(-b,a).
StateVector expected_collapse(BellKind kind, const StateVector& psi_in);

/// Bob's factor of a three-qubit state of the form |B_kind> (x) phi.
StateVector extract_bob_state(const StateVector& three_qubit, BellKind kind);

/// Throws DimensionMismatch unless psi_in is a normalized single qubit.
TeleportResult teleport(const StateVector& psi_in, SemanticsMode mode, Rng& rng);

/// Same, with Alice's outcome fixed instead of sampled. Every branch has
/// probability 1/4, so any kind is admissible.
TeleportResult teleport_forced(const StateVector& psi_in, SemanticsMode mode, BellKind kind);

}  // namespace postsim
