#include "postsim/measurement.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "postsim/errors.hpp"
#include "postsim/protocols.hpp"

using namespace postsim;
using postsim::testing::max_abs;

namespace {

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const Observable& sigma3() {
  static const Observable z(mat2(1, 0, 0, -1), {2});
  return z;
}

StateVector plus() { return StateVector::normalized(Eigen::Vector2cd(1, 1), {2}); }

StateVector qubit(Complex a, Complex b) { return StateVector::normalized(Eigen::Vector2cd(a, b), {2}); }

void expect_error(ErrorCode code, const auto& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Random observable with a nondegenerate spectrum on `dim`.
Observable random_nondegenerate(std::size_t dim, std::mt19937_64& gen) {
  return Observable(postsim::testing::random_hermitian(dim, gen, false), {dim});
}

}  // namespace

// ---------- SemanticsMode ----------

TEST(SemanticsMode, StringFormsRoundTrip) {
  for (SemanticsMode mode : kAllModes) EXPECT_EQ(parse_semantics_mode(to_string(mode)), mode);
  EXPECT_EQ(to_string(SemanticsMode::StrictVonNeumann), "von-neumann");
  EXPECT_EQ(to_string(SemanticsMode::Lueders), "lueders");
  expect_error(ErrorCode::ParseError, [] { parse_semantics_mode("luders"); });
}

// ---------- born_probability ----------

TEST(BornProbability, EigenstateHasProbabilityOne) {
  const std::size_t plus_one = *sigma3().spectrum().find(1.0);
  EXPECT_DOUBLE_EQ(born_probability(sigma3(), plus_one, StateVector::basis({2}, 0)), 1.0);
}

TEST(BornProbability, BellOutcomesAreEquiprobable) {
  const StateVector psi = teleport_initial_state(qubit(Complex(0.3, 0.1), Complex(-0.5, 0.8)));
  const Observable bell = lifted_bell_observable();
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(born_probability(bell, k, psi), 0.25, 1e-12);
}

TEST(BornProbability, Sigma3OnFirstQubitOfPhiPlus) {
  // ||(|0><0| (x) I) Phi+||^2 = |1/sqrt2|^2 = 1/2.
  const Observable a = lift(sigma3(), 0, {2, 2});
  EXPECT_NEAR(born_probability(a, *a.spectrum().find(1.0), bell_state(BellKind::PhiPlus)), 0.5, 1e-15);
}

TEST(BornProbability, Errors) {
  expect_error(ErrorCode::DimensionMismatch, [] { born_probability(sigma3(), 0, StateVector::basis({4}, 0)); });
  expect_error(ErrorCode::IndexOutOfRange, [] { born_probability(sigma3(), 2, StateVector::basis({2}, 0)); });
}

TEST(BornProbability, MatchesBruteForceOracleAndSumsToOne) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const CMatrix h = postsim::testing::random_hermitian(n, gen, trial % 2 == 1);
    const Observable a(h, {n});
    const StateVector psi(postsim::testing::random_state(n, gen), {n});
    const auto oracle = postsim::testing::lapack_eigh(h);
    double total = 0.0;
    for (std::size_t i = 0; i < a.spectrum().size(); ++i) {
      const double p = born_probability(a, i, psi);
      const CVector projected = postsim::testing::oracle_projector(oracle, a.spectrum().eigenvalues[i]) * psi.amplitudes();
      EXPECT_NEAR(p, projected.squaredNorm(), 1e-9);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

// ---------- measure ----------

TEST(Measure, Sigma3OnPlusAgreesAcrossModes) {
  for (SemanticsMode mode : kAllModes) {
    Rng rng(1);
    int ups = 0;
    for (int i = 0; i < 2000; ++i) {
      const MeasurementOutcome out = measure(sigma3(), plus(), mode, rng);
      ASSERT_TRUE(out.determined);
      EXPECT_NEAR(out.probability, 0.5, 1e-15);
      const StateVector expected = StateVector::basis({2}, out.eigenvalue > 0 ? 0 : 1);
      EXPECT_TRUE(phase_equal(*out.post_state, expected, 1e-12));
      ups += out.eigenvalue > 0;
    }
    EXPECT_NEAR(ups / 2000.0, 0.5, 0.05);
  }
}

TEST(Measure, LuedersBellPhiMinusBranch) {
  const Complex alpha(0.6, 0.0), beta(0.0, 0.8);
  const StateVector psi = teleport_initial_state(qubit(alpha, beta));
  const MeasurementOutcome out = measure_forced(lifted_bell_observable(), psi, SemanticsMode::Lueders,
                                                static_cast<std::size_t>(BellKind::PhiMinus));
  ASSERT_TRUE(out.determined);
  const StateVector expected = tensor_state(bell_state(BellKind::PhiMinus), qubit(alpha, -beta));
  EXPECT_TRUE(phase_equal(*out.post_state, expected, 1e-12));
  EXPECT_EQ(out.eigenprojector.rank(), 2U);
}

TEST(Measure, StrictBellMeasurementOnThreeQubitsIsUndetermined) {
  const StateVector psi = teleport_initial_state(qubit(0.6, 0.8));
  for (std::size_t k = 0; k < 4; ++k) {
    const MeasurementOutcome out =
        measure_forced(lifted_bell_observable(), psi, SemanticsMode::StrictVonNeumann, k);
    EXPECT_FALSE(out.determined);
    EXPECT_FALSE(out.post_state.has_value());
    EXPECT_EQ(out.eigenprojector.rank(), 2U);
    ASSERT_TRUE(out.lueders_state.has_value());
    EXPECT_NEAR(out.probability, 0.25, 1e-12);
  }
}

TEST(Measure, StrictPostStateIsPhaseNormalizedEigenvector) {
  const CMatrix y = mat2(0, Complex(0, -1), Complex(0, 1), 0);
  const Observable sy(y, {2});
  const MeasurementOutcome out = measure_forced(sy, plus(), SemanticsMode::StrictVonNeumann, 0);
  ASSERT_TRUE(out.determined);
  const StateVector& post = *out.post_state;
  EXPECT_GT(post[0].real(), 0.0);
  EXPECT_NEAR(post[0].imag(), 0.0, 1e-15);
  // sigma_y eigenvalue -1: (|0> - i|1>)/sqrt2.
  EXPECT_NEAR(std::abs(post[1] - Complex(0, -std::numbers::sqrt2 / 2)), 0.0, 1e-12);
}

TEST(Measure, ForcedZeroProbabilityBranchThrows) {
  expect_error(ErrorCode::ZeroProbabilityBranch, [] {
    measure_forced(sigma3(), StateVector::basis({2}, 0), SemanticsMode::Lueders, *sigma3().spectrum().find(-1.0));
  });
}

TEST(Measure, NeverSamplesZeroProbabilityOutcome) {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    EXPECT_EQ(measure(sigma3(), StateVector::basis({2}, 1), SemanticsMode::Lueders, rng).eigenvalue, -1.0);
  }
}

TEST(Measure, LuedersIsIdempotent) {
  std::mt19937_64 gen(21);
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const Observable a(postsim::testing::random_hermitian(n, gen, trial % 2 == 0), {n});
    const StateVector psi(postsim::testing::random_state(n, gen), {n});
    const MeasurementOutcome first = measure(a, psi, SemanticsMode::Lueders, rng);
    EXPECT_NEAR(born_probability(a, first.index, *first.post_state), 1.0, 1e-10);
    const MeasurementOutcome second = measure(a, *first.post_state, SemanticsMode::Lueders, rng);
    EXPECT_EQ(second.index, first.index);
    EXPECT_TRUE(phase_equal(*second.post_state, *first.post_state, 1e-10));
  }
}

TEST(Measure, ModesAgreeOnNondegenerateObservables) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const Observable a = random_nondegenerate(n, gen);
    ASSERT_FALSE(a.spectrum().degenerate());
    const StateVector psi(postsim::testing::random_state(n, gen), {n});
    for (std::size_t i = 0; i < a.spectrum().size(); ++i) {
      const MeasurementOutcome l = measure_forced(a, psi, SemanticsMode::Lueders, i);
      const MeasurementOutcome s = measure_forced(a, psi, SemanticsMode::StrictVonNeumann, i);
      ASSERT_TRUE(l.determined && s.determined);
      EXPECT_TRUE(phase_equal(*l.post_state, *s.post_state, 1e-10));
    }
  }
}

TEST(Measure, StrictRefusesExactlyOnDegenerateOutcomes) {
  std::mt19937_64 gen(31);
  Rng rng(31);
  std::size_t refused = 0;
  std::size_t accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
    const Observable a(postsim::testing::random_hermitian(n, gen, true), {n});
    const StateVector psi(postsim::testing::random_state(n, gen), {n});
    const MeasurementOutcome out = measure(a, psi, SemanticsMode::StrictVonNeumann, rng);
    const bool degenerate = a.spectrum().multiplicities[out.index] > 1;
    EXPECT_EQ(out.determined, !degenerate);
    EXPECT_EQ(out.post_state.has_value(), !degenerate);
    EXPECT_EQ(out.lueders_state.has_value(), degenerate);
    (degenerate ? refused : accepted) += 1;
  }
  EXPECT_GT(refused, 0U);
  EXPECT_GT(accepted, 0U);
}

// ---------- lift ----------

TEST(Lift, Sigma3OnFirstQubit) {
  const Observable a = lift(sigma3(), 0, {2, 2});
  const CMatrix expected = Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
  EXPECT_LT(max_abs(a.matrix() - expected), 1e-15);
  EXPECT_EQ(a.spectrum().multiplicities, (std::vector<std::size_t>{2, 2}));
  EXPECT_LT(max_abs(a.spectrum().reconstruct() - a.matrix()), 1e-15);
}

TEST(Lift, Sigma3OnSecondQubit) {
  const Observable a = lift(sigma3(), 1, {2, 2});
  const CMatrix expected = Eigen::Vector4cd(1, -1, 1, -1).asDiagonal();
  EXPECT_LT(max_abs(a.matrix() - expected), 1e-15);
  EXPECT_LT(max_abs(a.spectrum().reconstruct() - a.matrix()), 1e-15);
}

TEST(Lift, OnlySubsystemIsIdentityLift) {
  std::mt19937_64 gen(2);
  const Observable a = random_nondegenerate(3, gen);
  const Observable lifted = lift(a, 0, {3});
  EXPECT_EQ(lifted.matrix(), a.matrix());
  EXPECT_EQ(lifted.spectrum().eigenvalues, a.spectrum().eigenvalues);
}

TEST(Lift, StructuralSpectrumMatchesEigensolve) {
  std::mt19937_64 gen(12);
  const Observable a = random_nondegenerate(3, gen);
  const Observable lifted = lift(a, 1, {2, 3, 2});
  const Observable solved(lifted.matrix(), lifted.dims());
  ASSERT_EQ(solved.spectrum().size(), lifted.spectrum().size());
  for (std::size_t i = 0; i < solved.spectrum().size(); ++i) {
    EXPECT_NEAR(solved.spectrum().eigenvalues[i], lifted.spectrum().eigenvalues[i], 1e-9);
    EXPECT_EQ(lifted.spectrum().multiplicities[i], 4U);
    EXPECT_LT(max_abs(solved.spectrum().projector(i) - lifted.spectrum().projector(i)), 1e-9);
  }
}

TEST(Lift, Errors) {
  expect_error(ErrorCode::IndexOutOfRange, [] { lift(sigma3(), 2, {2, 2}); });
  expect_error(ErrorCode::DimensionMismatch, [] { lift(sigma3(), 0, {3, 2}); });
}

// ---------- partial_measure ----------

TEST(PartialMeasure, Sigma3OnPhiPlus) {
  const std::size_t up = *sigma3().spectrum().find(1.0);
  const MeasurementOutcome out =
      partial_measure_forced(sigma3(), 0, bell_state(BellKind::PhiPlus), SemanticsMode::Lueders, up);
  EXPECT_NEAR(out.probability, 0.5, 1e-15);
  EXPECT_TRUE(phase_equal(*out.post_state, StateVector::basis({2, 2}, 0), 1e-12));
  EXPECT_TRUE(phase_equal(*out.subsystem_state, StateVector::basis({2}, 0), 1e-12));
  EXPECT_EQ(out.eigenprojector.rank(), 2U);
}

TEST(PartialMeasure, ProductEigenstateIsUnchanged) {
  const StateVector psi = tensor_state(StateVector::basis({2}, 0), plus());
  Rng rng(0);
  for (int i = 0; i < 50; ++i) {
    const MeasurementOutcome out = partial_measure(sigma3(), 0, psi, SemanticsMode::Lueders, rng);
    EXPECT_EQ(out.eigenvalue, 1.0);
    EXPECT_NEAR(out.probability, 1.0, 1e-15);
    EXPECT_TRUE(phase_equal(*out.post_state, psi, 1e-12));
  }
}

TEST(PartialMeasure, StrictModeReportsSubsystemStateOnly) {
  const MeasurementOutcome out =
      partial_measure_forced(sigma3(), 1, bell_state(BellKind::PsiMinus), SemanticsMode::StrictVonNeumann, 0);
  EXPECT_FALSE(out.determined);
  EXPECT_FALSE(out.post_state.has_value());
  EXPECT_TRUE(out.lueders_state.has_value());
  EXPECT_TRUE(phase_equal(*out.subsystem_state, StateVector::basis({2}, 1), 1e-12));
}

TEST(PartialMeasure, DegenerateLocalObservableIsRejected) {
  expect_error(ErrorCode::DegenerateLocalObservable, [] {
    Rng rng(0);
    partial_measure(Observable::identity({2}), 0, bell_state(BellKind::PhiPlus), SemanticsMode::Lueders, rng);
  });
}

TEST(PartialMeasure, ProbabilitiesMatchLiftedObservable) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Dims dims{2, 3, 2};
    const std::size_t sub = static_cast<std::size_t>(trial % 3);
    const Observable a = random_nondegenerate(dims[sub], gen);
    const StateVector psi(postsim::testing::random_state(12, gen), dims);
    const std::vector<double> partial = partial_distribution(a, sub, psi);
    const std::vector<double> full = born_distribution(lift(a, sub, dims), psi);
    ASSERT_EQ(partial.size(), full.size());
    for (std::size_t i = 0; i < full.size(); ++i) EXPECT_NEAR(partial[i], full[i], 1e-12);
  }
}

TEST(PartialMeasure, LuedersPostStateFactorizesOntoEigenstate) {
  std::mt19937_64 gen(606);
  Rng rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d1 = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t d2 = 2 + static_cast<std::size_t>((trial / 3) % 2);
    const std::size_t sub = static_cast<std::size_t>(trial % 2);
    const Dims dims{d1, d2};
    const Observable a = random_nondegenerate(dims[sub], gen);
    const StateVector psi(postsim::testing::random_state(d1 * d2, gen), dims);
    const MeasurementOutcome out = partial_measure(a, sub, psi, SemanticsMode::Lueders, rng);
    const StateVector& post = *out.post_state;

    EXPECT_LT(max_abs(out.eigenprojector.apply(post.amplitudes()) - post.amplitudes()), 1e-10);

    // Extract phi = (<alpha| (x) I) post and compare post with |alpha> (x) phi.
    const CVector alpha = out.subsystem_state->amplitudes();
    const std::size_t other = dims[1 - sub];
    CVector phi = CVector::Zero(static_cast<Eigen::Index>(other));
    for (std::size_t k = 0; k < dims[sub]; ++k) {
      for (std::size_t r = 0; r < other; ++r) {
        const std::size_t flat = sub == 0 ? k * other + r : r * dims[sub] + k;
        phi(static_cast<Eigen::Index>(r)) += std::conj(alpha(static_cast<Eigen::Index>(k))) *
                                             post[flat];
      }
    }
    const StateVector phi_state = StateVector::normalized(phi, {other});
    const StateVector rebuilt = sub == 0 ? tensor_state(*out.subsystem_state, phi_state)
                                         : tensor_state(phi_state, *out.subsystem_state);
    EXPECT_GE(overlap(rebuilt, StateVector(post.amplitudes(), rebuilt.dims())), 1.0 - 1e-10);
  }
}

// ---------- build_refinement ----------

TEST(Refinement, Sigma3TensorIdentity) {
  const Observable a = lift(sigma3(), 0, {2, 2});
  const RefinementObservable r = build_refinement(a);
  // Eigenspaces in ascending order: -1 on {|10>, |11>}, then +1 on {|00>, |01>}.
  EXPECT_EQ(r.value_map, (std::vector<double>{-1.0, -1.0, 1.0, 1.0}));
  const CMatrix expected_c = Eigen::Vector4cd(2, 3, 0, 1).asDiagonal();
  EXPECT_LT(max_abs(r.refinement.matrix() - expected_c), 1e-12);
  const RefinementCheck check = check_refinement(a, r);
  EXPECT_TRUE(check.refinement_nondegenerate);
  EXPECT_LT(check.commutator_norm, 1e-9);
  EXPECT_LT(check.reconstruction_error, 1e-9);
}

TEST(Refinement, NondegenerateObservableIsRelabelled) {
  std::mt19937_64 gen(42);
  const Observable a = random_nondegenerate(4, gen);
  const RefinementObservable r = build_refinement(a);
  EXPECT_EQ(r.value_map, a.spectrum().eigenvalues);
  for (std::size_t k = 0; k < 4; ++k) {
    const CMatrix pc = r.refinement.spectrum().projector(k);
    EXPECT_LT(max_abs(pc - a.spectrum().projector(k)), 1e-9);
  }
}

TEST(Refinement, ScalarObservable) {
  const Observable a = Observable::identity({4});
  const RefinementObservable r = build_refinement(a);
  EXPECT_EQ(r.value_map, (std::vector<double>(4, 1.0)));
  EXPECT_EQ(r.refinement.spectrum().size(), 4U);
  const RefinementCheck check = check_refinement(a, r);
  EXPECT_TRUE(check.refinement_nondegenerate);
  EXPECT_LT(check.reconstruction_error, 1e-9);
}

TEST(Refinement, RandomHermitianRefinementsAreSound) {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const Observable a(postsim::testing::random_hermitian(n, gen, trial % 2 == 0), {n});
    const RefinementCheck check = check_refinement(a, build_refinement(a));
    EXPECT_TRUE(check.refinement_nondegenerate);
    EXPECT_LT(check.commutator_norm, 1e-9);
    EXPECT_LT(check.reconstruction_error, 1e-9);
  }
}
