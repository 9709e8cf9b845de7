#include "postsim/protocols.hpp"

#include <cmath>
#include <utility>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t as_label(BellKind kind) { return static_cast<std::size_t>(kind); }

CVector bell_amplitudes(BellKind kind) {
  CVector v = CVector::Zero(4);
  switch (kind) {
    case BellKind::PhiPlus: v << kInvSqrt2, 0, 0, kInvSqrt2; break;
    case BellKind::PhiMinus: v << kInvSqrt2, 0, 0, -kInvSqrt2; break;
    case BellKind::PsiPlus: v << 0, kInvSqrt2, kInvSqrt2, 0; break;
    case BellKind::PsiMinus: v << 0, kInvSqrt2, -kInvSqrt2, 0; break;
  }
  return v;
}

void require_qubit(const StateVector& psi) {
  if (psi.dims() != Dims{2}) throw Error(ErrorCode::DimensionMismatch, "teleport input must be one qubit");
}

}  // namespace

std::string_view to_string(BellKind kind) noexcept {
  switch (kind) {
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
  }
  return "unknown";
}

std::string_view classical_bits(BellKind kind) noexcept {
  switch (kind) {
    case BellKind::PhiPlus: return "00";
    case BellKind::PhiMinus: return "01";
    case BellKind::PsiPlus: return "10";
    case BellKind::PsiMinus: return "11";
  }
  return "??";
}

std::string_view to_string(Correction correction) noexcept {
  switch (correction) {
    case Correction::Identity: return "I";
    case Correction::Sigma3: return "sigma3";
    case Correction::Sigma1: return "sigma1";
    case Correction::Sigma3Sigma1: return "sigma3*sigma1";
  }
  return "unknown";
}

StateVector bell_state(BellKind kind) { return StateVector(bell_amplitudes(kind), {2, 2}); }

Observable bell_basis_observable() {
  // The spectrum is known exactly, so skip the eigensolver and its rounding.
  CMatrix m = CMatrix::Zero(4, 4);
  SpectralDecomposition spectrum;
  for (BellKind kind : kBellKinds) {
    const CVector b = bell_amplitudes(kind);
    const auto label = static_cast<double>(as_label(kind));
    m += label * (b * b.adjoint());
    spectrum.eigenvalues.push_back(label);
    spectrum.eigenspaces.emplace_back(b);
    spectrum.multiplicities.push_back(1);
  }
  return Observable::from_decomposition(std::move(m), {2, 2}, std::move(spectrum));
}

Observable lifted_bell_observable() {
  const Observable local = bell_basis_observable();
  Observable lifted = lift(Observable::from_decomposition(local.matrix(), {4}, local.spectrum()), 0, {4, 2});
  return Observable::from_decomposition(lifted.matrix(), {2, 2, 2}, lifted.spectrum());
}

Correction correction_for(BellKind kind) noexcept {
  switch (kind) {
    case BellKind::PhiPlus: return Correction::Identity;
    case BellKind::PhiMinus: return Correction::Sigma3;
    case BellKind::PsiPlus: return Correction::Sigma1;
    case BellKind::PsiMinus: return Correction::Sigma3Sigma1;
  }
  return Correction::Identity;
}

CMatrix correction_gate(BellKind kind) {
  CMatrix g(2, 2);
  switch (correction_for(kind)) {
    case Correction::Identity: g << 1, 0, 0, 1; break;
    case Correction::Sigma3: g << 1, 0, 0, -1; break;
    case Correction::Sigma1: g << 0, 1, 1, 0; break;
    case Correction::Sigma3Sigma1: g << 0, 1, -1, 0; break;
  }
  return g;
}

DegeneracyReport degeneracy_report(const Observable& a) {
  return DegeneracyReport{a.dimension(), a.spectrum().size(), a.spectrum().multiplicities};
}

StateVector teleport_initial_state(const StateVector& psi_in) {
  require_qubit(psi_in);
  return tensor_state(psi_in, bell_state(BellKind::PhiPlus));
}

StateVector expected_collapse(BellKind kind, const StateVector& psi_in) {
  require_qubit(psi_in);
  const CVector bob = correction_gate(kind).adjoint() * psi_in.amplitudes();
  return tensor_state(bell_state(kind), StateVector(bob, {2}));
}

StateVector extract_bob_state(const StateVector& three_qubit, BellKind kind) {
  if (three_qubit.dimension() != 8) throw Error(ErrorCode::DimensionMismatch, "expected a three-qubit state");
  // Row index = Alice's two qubits, column = Bob's qubit.
  const Eigen::Map<const Eigen::Matrix<Complex, 4, 2, Eigen::RowMajor>> unfolded(three_qubit.amplitudes().data());
  const CVector bob = unfolded.transpose() * bell_amplitudes(kind).conjugate();
  return StateVector::normalized(bob, {2});
}

namespace {

TeleportResult finish(const StateVector& psi_in, const Observable& bell, MeasurementOutcome outcome) {
  const auto kind = static_cast<BellKind>(std::lround(outcome.eigenvalue));
  TeleportResult result{
      .outcome_kind = kind,
      .classical_bits = classical_bits(kind),
      .outcome_probability = outcome.probability,
      .correction = correction_for(kind),
      .bob_state_before_correction = std::nullopt,
      .bob_state_after_correction = std::nullopt,
      .blocked = std::nullopt,
      .fidelity = std::nullopt,
      .measurement = std::move(outcome),
  };
  if (!result.measurement.determined) {
    result.blocked = degeneracy_report(bell);
    return result;
  }
  StateVector before = extract_bob_state(*result.measurement.post_state, kind);
  StateVector after = StateVector::normalized(correction_gate(kind) * before.amplitudes(), {2});
  const double ov = overlap(psi_in, after);
  result.fidelity = ov * ov;
  result.bob_state_before_correction = std::move(before);
  result.bob_state_after_correction = std::move(after);
  return result;
}

}  // namespace

TeleportResult teleport(const StateVector& psi_in, SemanticsMode mode, Rng& rng) {
  const StateVector initial = teleport_initial_state(psi_in);
  const Observable bell = lifted_bell_observable();
  return finish(psi_in, bell, measure(bell, initial, mode, rng));
}

TeleportResult teleport_forced(const StateVector& psi_in, SemanticsMode mode, BellKind kind) {
  const StateVector initial = teleport_initial_state(psi_in);
  const Observable bell = lifted_bell_observable();
  return finish(psi_in, bell, measure_forced(bell, initial, mode, as_label(kind)));
}

}  // namespace postsim
