#include "postsim/protocols.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "postsim/errors.hpp"

using namespace postsim;
using postsim::testing::max_abs;

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;

StateVector qubit(Complex a, Complex b) { return StateVector::normalized(Eigen::Vector2cd(a, b), {2}); }

// Literal amplitudes over |00>, |01>, |10>, |11>.
Eigen::Vector4cd literal_bell(BellKind kind) {
  switch (kind) {
    case BellKind::PhiPlus: return Eigen::Vector4cd(kInvSqrt2, 0, 0, kInvSqrt2);
    case BellKind::PhiMinus: return Eigen::Vector4cd(kInvSqrt2, 0, 0, -kInvSqrt2);
    case BellKind::PsiPlus: return Eigen::Vector4cd(0, kInvSqrt2, kInvSqrt2, 0);
    case BellKind::PsiMinus: return Eigen::Vector4cd(0, kInvSqrt2, -kInvSqrt2, 0);
  }
  return {};
}

StateVector random_qubit(std::mt19937_64& gen) { return StateVector(postsim::testing::random_state(2, gen), {2}); }

}  // namespace

TEST(Bell, StatesMatchLiteralAmplitudes) {
  for (BellKind kind : kBellKinds) {
    EXPECT_LT(max_abs(bell_state(kind).amplitudes() - literal_bell(kind)), 1e-15) << to_string(kind);
    EXPECT_EQ(bell_state(kind).dims(), (Dims{2, 2}));
  }
}

TEST(Bell, BasisIsOrthonormal) {
  for (BellKind a : kBellKinds) {
    for (BellKind b : kBellKinds) {
      const Complex ip = bell_state(a).amplitudes().dot(bell_state(b).amplitudes());
      EXPECT_NEAR(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 0.0, 1e-15);
    }
  }
}

TEST(Bell, LabelsAndMessages) {
  EXPECT_EQ(to_string(BellKind::PhiPlus), "phi+");
  EXPECT_EQ(to_string(BellKind::PsiMinus), "psi-");
  EXPECT_EQ(classical_bits(BellKind::PhiPlus), "00");
  EXPECT_EQ(classical_bits(BellKind::PhiMinus), "01");
  EXPECT_EQ(classical_bits(BellKind::PsiPlus), "10");
  EXPECT_EQ(classical_bits(BellKind::PsiMinus), "11");
  EXPECT_EQ(to_string(correction_for(BellKind::PsiMinus)), "sigma3*sigma1");
}

TEST(Bell, ObservableSpectrum) {
  const Observable b = bell_basis_observable();
  EXPECT_EQ(b.spectrum().eigenvalues, (std::vector<double>{0, 1, 2, 3}));
  EXPECT_FALSE(b.spectrum().degenerate());
  for (BellKind kind : kBellKinds) {
    const CVector v = literal_bell(kind);
    const CMatrix expected = v * v.adjoint();
    EXPECT_LT(max_abs(b.spectrum().projector(static_cast<std::size_t>(kind)) - expected), 1e-12);
  }
}

TEST(Bell, LiftedObservableIsDegenerate) {
  const Observable lifted = lifted_bell_observable();
  EXPECT_EQ(lifted.dims(), (Dims{2, 2, 2}));
  const DegeneracyReport report = degeneracy_report(lifted);
  EXPECT_EQ(report, (DegeneracyReport{8, 4, {2, 2, 2, 2}}));
}

TEST(Bell, ComputationalBasisIdentities) {
  // |00> = (Phi+ + Phi-)/sqrt2, |11> = (Phi+ - Phi-)/sqrt2,
  // |01> = (Psi+ + Psi-)/sqrt2, |10> = (Psi+ - Psi-)/sqrt2.
  const auto b = [](BellKind k) { return bell_state(k).amplitudes(); };
  const auto e = [](std::size_t i) { return StateVector::basis({2, 2}, i).amplitudes(); };
  using enum BellKind;
  EXPECT_LT(max_abs(e(0) - kInvSqrt2 * (b(PhiPlus) + b(PhiMinus))), 1e-12);
  EXPECT_LT(max_abs(e(3) - kInvSqrt2 * (b(PhiPlus) - b(PhiMinus))), 1e-12);
  EXPECT_LT(max_abs(e(1) - kInvSqrt2 * (b(PsiPlus) + b(PsiMinus))), 1e-12);
  EXPECT_LT(max_abs(e(2) - kInvSqrt2 * (b(PsiPlus) - b(PsiMinus))), 1e-12);
}

TEST(Bell, TeleportExpansionHolds) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector psi = random_qubit(gen);
    CVector sum = CVector::Zero(8);
    for (BellKind kind : kBellKinds) sum += 0.5 * expected_collapse(kind, psi).amplitudes();
    EXPECT_LT(max_abs(sum - teleport_initial_state(psi).amplitudes()), 1e-12);
  }
}

TEST(Correction, GatesAreLiteral) {
  CMatrix expected(2, 2);
  expected << 1, 0, 0, 1;
  EXPECT_EQ(correction_gate(BellKind::PhiPlus), expected);
  expected << 1, 0, 0, -1;
  EXPECT_EQ(correction_gate(BellKind::PhiMinus), expected);
  expected << 0, 1, 1, 0;
  EXPECT_EQ(correction_gate(BellKind::PsiPlus), expected);
  expected << 0, 1, -1, 0;
  EXPECT_EQ(correction_gate(BellKind::PsiMinus), expected);
}

TEST(Teleport, ForcedBranchesMatchBellExpansion) {
  const Complex alpha(0.6, 0.0), beta(0.0, 0.8);
  const StateVector psi = qubit(alpha, beta);
  const std::map<BellKind, std::pair<Complex, Complex>> before = {
      {BellKind::PhiPlus, {alpha, beta}},
      {BellKind::PhiMinus, {alpha, -beta}},
      {BellKind::PsiPlus, {beta, alpha}},
      {BellKind::PsiMinus, {-beta, alpha}},
  };
  for (BellKind kind : kBellKinds) {
    const TeleportResult r = teleport_forced(psi, SemanticsMode::Lueders, kind);
    EXPECT_EQ(r.outcome_kind, kind);
    EXPECT_EQ(r.classical_bits, classical_bits(kind));
    EXPECT_NEAR(r.outcome_probability, 0.25, 1e-12);
    ASSERT_TRUE(r.bob_state_before_correction.has_value());
    const auto [a, b] = before.at(kind);
    EXPECT_TRUE(phase_equal(*r.bob_state_before_correction, qubit(a, b), 1e-12)) << to_string(kind);
    EXPECT_TRUE(phase_equal(*r.measurement.post_state, expected_collapse(kind, psi), 1e-12));
    ASSERT_TRUE(r.fidelity.has_value());
    EXPECT_NEAR(*r.fidelity, 1.0, 1e-10);
    EXPECT_FALSE(r.blocked.has_value());
  }
}

TEST(Teleport, ExtractBobStateInvertsProduct) {
  std::mt19937_64 gen(3);
  for (BellKind kind : kBellKinds) {
    const StateVector phi = random_qubit(gen);
    const StateVector joint = tensor_state(bell_state(kind), phi);
    EXPECT_TRUE(phase_equal(extract_bob_state(joint, kind), phi, 1e-12));
  }
}

TEST(Teleport, LuedersFidelityOverRandomInputs) {
  std::mt19937_64 gen(2024);
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateVector psi = random_qubit(gen);
    for (BellKind kind : kBellKinds) {
      const TeleportResult r = teleport_forced(psi, SemanticsMode::Lueders, kind);
      ASSERT_TRUE(r.fidelity.has_value());
      EXPECT_GE(*r.fidelity, 1.0 - 1e-10);
    }
    const TeleportResult sampled = teleport(psi, SemanticsMode::Lueders, rng);
    EXPECT_GE(*sampled.fidelity, 1.0 - 1e-10);
  }
}

TEST(Teleport, OutcomesAreUniform) {
  Rng rng(99);
  const StateVector psi = qubit(Complex(0.2, 0.4), Complex(-0.7, 0.1));
  std::map<BellKind, int> counts;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) ++counts[teleport(psi, SemanticsMode::Lueders, rng).outcome_kind];
  for (BellKind kind : kBellKinds) EXPECT_NEAR(counts[kind] / static_cast<double>(trials), 0.25, 0.015);
}

TEST(Teleport, StrictSemanticsBlocks) {
  Rng rng(1);
  const StateVector psi = qubit(0.6, 0.8);
  for (int i = 0; i < 20; ++i) {
    const TeleportResult r = teleport(psi, SemanticsMode::StrictVonNeumann, rng);
    ASSERT_TRUE(r.blocked.has_value());
    EXPECT_EQ(r.blocked->multiplicities, (std::vector<std::size_t>{2, 2, 2, 2}));
    EXPECT_EQ(r.blocked->dimension, 8U);
    EXPECT_FALSE(r.bob_state_after_correction.has_value());
    EXPECT_FALSE(r.fidelity.has_value());
    EXPECT_FALSE(r.measurement.determined);
    EXPECT_EQ(r.measurement.eigenprojector.rank(), 2U);
    EXPECT_NEAR(r.outcome_probability, 0.25, 1e-12);
  }
}

TEST(Teleport, RejectsNonQubitInput) {
  Rng rng(0);
  try {
    teleport(StateVector::basis({3}, 0), SemanticsMode::Lueders, rng);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}
