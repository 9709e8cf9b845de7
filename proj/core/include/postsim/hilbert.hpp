#pragma once

// Finite-dimensional complex Hilbert-space primitives: pure states,
// Hermitian observables with a cached spectral decomposition, tensor
// products and phase-insensitive comparison.
//
// Basis ordering is big-endian across subsystems: for dims {d0, d1, ...}
// the leftmost subsystem is the most significant digit of the flat index.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace postsim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double kNormTol = 1e-10;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kDegenTol = 1e-9;
/// Largest state dimension (16 qubits).
inline constexpr std::size_t kMaxStateDimension = std::size_t{1} << 16;
/// Largest dense observable dimension (12 qubits).
inline constexpr std::size_t kMaxObservableDimension = std::size_t{1} << 12;

/// Product of subsystem dimensions. Throws DimensionMismatch on an empty or
/// zero-sized factor.
std::size_t total_dimension(const Dims& dims);

/// n copies of a two-level subsystem.
Dims qubit_dims(std::size_t n);

/// Flat index of (l, k, r) is (l * local + k) * right + r, where l runs over
/// the factors left of the subsystem and r over those to its right.
struct SubsystemLayout {
  std::size_t left;
  std::size_t local;
  std::size_t right;
};

/// Throws IndexOutOfRange when subsystem >= dims.size().
SubsystemLayout subsystem_layout(const Dims& dims, std::size_t subsystem);

/// dims with the entry at `subsystem` removed.
Dims remove_subsystem(const Dims& dims, std::size_t subsystem);

/// Normalized pure state over a composite space.
class StateVector {
 public:
  /// Validates the norm against kNormTol; throws NotNormalized otherwise.
  StateVector(CVector amplitudes, Dims dims);

  /// Rescales to unit norm. Throws NotNormalized for a (numerically) zero
  /// vector.
  static StateVector normalized(CVector amplitudes, Dims dims);
  static StateVector basis(Dims dims, std::size_t index);

  [[nodiscard]] const CVector& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(amplitudes_.size());
  }
  [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// Same state with the global phase fixed so that the first amplitude whose
  /// modulus exceeds kNormTol is positive real.
  [[nodiscard]] StateVector phase_normalized() const;

 private:
  CVector amplitudes_;
  Dims dims_;
};

/// Orthogonal projector stored through an orthonormal basis of its range.
///
/// When `subsystem` is set the basis lives on that one factor of `dims` and
/// the projector acts as identity on every other factor, so a lifted
/// projector E (x) I never needs its full matrix.
class Projector {
 public:
  Projector(CMatrix range_basis, Dims dims, std::optional<std::size_t> subsystem = std::nullopt);

  [[nodiscard]] std::size_t rank() const noexcept;
  [[nodiscard]] std::size_t dimension() const noexcept { return total_dimension(dims_); }
  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::optional<std::size_t> subsystem() const noexcept { return subsystem_; }
  [[nodiscard]] const CMatrix& range_basis() const noexcept { return basis_; }

  [[nodiscard]] CVector apply(const CVector& v) const;
  /// Dense matrix; only sensible for modest dimensions.
  [[nodiscard]] CMatrix dense() const;

 private:
  CMatrix basis_;
  Dims dims_;
  std::optional<std::size_t> subsystem_;
};

/// Distinct eigenvalues (ascending) with their eigenspaces.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  /// Column-orthonormal basis of each eigenspace, same order as eigenvalues.
  std::vector<CMatrix> eigenspaces;
  std::vector<std::size_t> multiplicities;

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
  [[nodiscard]] bool degenerate() const noexcept;
  [[nodiscard]] CMatrix projector(std::size_t i) const;
  /// Sum of lambda_i P_i.
  [[nodiscard]] CMatrix reconstruct() const;
  /// Index of the eigenvalue within kDegenTol of `value`, if any.
  [[nodiscard]] std::optional<std::size_t> find(double value) const;
};

/// Eigen-decomposes a Hermitian matrix, merging eigenvalues closer than
/// kDegenTol into one (their mean) with a combined eigenspace. Exactly
/// diagonal input takes an O(n^2) path. Throws NotHermitian.
SpectralDecomposition spectral_decompose(const CMatrix& matrix);

/// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const CMatrix& matrix);

/// Hermitian operator over a composite space, decomposed at construction.
/// Immutable; copies share the decomposition.
class Observable {
 public:
  /// Throws NotHermitian, DimensionMismatch or DimensionTooLarge.
  Observable(CMatrix matrix, Dims dims);

  /// Builds from a known decomposition (skips the eigensolve). The caller
  /// vouches that `decomposition` belongs to `matrix`.
  static Observable from_decomposition(CMatrix matrix, Dims dims, SpectralDecomposition decomposition);

  static Observable identity(Dims dims);
  static Observable diagonal(const std::vector<double>& values, Dims dims);

  [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(matrix_.rows());
  }
  [[nodiscard]] const SpectralDecomposition& spectrum() const noexcept { return *spectrum_; }

 private:
  Observable(CMatrix matrix, Dims dims, std::shared_ptr<const SpectralDecomposition> spectrum);

  CMatrix matrix_;
  Dims dims_;
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

/// Kronecker products of raw matrices and vectors (left factor most significant).
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron_vector(const CVector& a, const CVector& b);

StateVector tensor_state(const StateVector& a, const StateVector& b);
Observable tensor_op(const Observable& a, const Observable& b);

/// |<a|b>|. Throws DimensionMismatch when the dims differ.
double overlap(const StateVector& a, const StateVector& b);

/// True iff |<a|b>| >= 1 - tol. Throws DimensionMismatch.
bool phase_equal(const StateVector& a, const StateVector& b, double tol);

}  // namespace postsim
