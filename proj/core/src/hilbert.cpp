#include "postsim/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

using Index = Eigen::Index;

Index as_index(std::size_t i) { return static_cast<Index>(i); }

void check_dims_match(std::size_t size, const Dims& dims, std::size_t cap, const char* what) {
  const std::size_t total = total_dimension(dims);
  if (total != size) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": dims product " +
                                                  std::to_string(total) + " != " + std::to_string(size));
  }
  if (size > cap) {
    throw Error(ErrorCode::DimensionTooLarge,
                std::string(what) + ": dimension " + std::to_string(size) + " exceeds " + std::to_string(cap));
  }
}

bool is_exactly_diagonal(const CMatrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex{0.0, 0.0}) return false;
    }
  }
  return true;
}

// Groups ascending eigenvalues into clusters whose span is at most kDegenTol
// and collects the matching eigenvector columns.
SpectralDecomposition cluster(const std::vector<double>& sorted_values, const CMatrix& sorted_vectors) {
  SpectralDecomposition out;
  const std::size_t n = sorted_values.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && sorted_values[stop] - sorted_values[start] <= kDegenTol) ++stop;
    const std::size_t count = stop - start;
    double mean = 0.0;
    for (std::size_t i = start; i < stop; ++i) mean += sorted_values[i];
    out.eigenvalues.push_back(mean / static_cast<double>(count));
    out.eigenspaces.push_back(sorted_vectors.middleCols(as_index(start), as_index(count)));
    out.multiplicities.push_back(count);
    start = stop;
  }
  return out;
}

SpectralDecomposition decompose_diagonal(const CMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return m(as_index(a), as_index(a)).real() < m(as_index(b), as_index(b)).real();
  });
  std::vector<double> values(n);
  CMatrix vectors = CMatrix::Zero(as_index(n), as_index(n));
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = m(as_index(order[i]), as_index(order[i])).real();
    vectors(as_index(order[i]), as_index(i)) = 1.0;
  }
  return cluster(values, vectors);
}

}  // namespace

std::size_t total_dimension(const Dims& dims) {
  if (dims.empty()) throw Error(ErrorCode::DimensionMismatch, "empty dimension list");
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw Error(ErrorCode::DimensionMismatch, "zero-dimensional subsystem");
    if (total > kMaxStateDimension) {
      throw Error(ErrorCode::DimensionTooLarge, "dimension product overflows the supported range");
    }
    total *= d;
  }
  return total;
}

Dims qubit_dims(std::size_t n) { return Dims(n, 2); }

SubsystemLayout subsystem_layout(const Dims& dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "subsystem " + std::to_string(subsystem) + " of " +
                                                std::to_string(dims.size()));
  }
  SubsystemLayout layout{1, dims[subsystem], 1};
  for (std::size_t i = 0; i < subsystem; ++i) layout.left *= dims[i];
  for (std::size_t i = subsystem + 1; i < dims.size(); ++i) layout.right *= dims[i];
  return layout;
}

Dims remove_subsystem(const Dims& dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) throw Error(ErrorCode::IndexOutOfRange, "subsystem out of range");
  Dims out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i != subsystem) out.push_back(dims[i]);
  }
  if (out.empty()) out.push_back(1);
  return out;
}

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(CVector amplitudes, Dims dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  check_dims_match(static_cast<std::size_t>(amplitudes_.size()), dims_, kMaxStateDimension, "state");
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::NotNormalized, "non-finite amplitude");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw Error(ErrorCode::NotNormalized, "norm " + std::to_string(norm));
  }
}

StateVector StateVector::normalized(CVector amplitudes, Dims dims) {
  const double norm = amplitudes.norm();
  if (!(norm > kNormTol) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NotNormalized, "cannot normalize a zero vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes), std::move(dims));
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
  const std::size_t total = total_dimension(dims);
  if (index >= total) {
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(index));
  }
  CVector v = CVector::Zero(as_index(total));
  v(as_index(index)) = 1.0;
  return StateVector(std::move(v), std::move(dims));
}

StateVector StateVector::phase_normalized() const {
  for (Index i = 0; i < amplitudes_.size(); ++i) {
    const double mag = std::abs(amplitudes_(i));
    if (mag > kNormTol) {
      const Complex phase = std::conj(amplitudes_(i)) / mag;
      CVector out = amplitudes_ * phase;
      out(i) = Complex{mag, 0.0};
      return StateVector::normalized(std::move(out), dims_);
    }
  }
  return *this;
}

// ------------------------------------------------------------------ Projector

Projector::Projector(CMatrix range_basis, Dims dims, std::optional<std::size_t> subsystem)
    : basis_(std::move(range_basis)), dims_(std::move(dims)), subsystem_(subsystem) {
  const std::size_t expected =
      subsystem_ ? subsystem_layout(dims_, *subsystem_).local : total_dimension(dims_);
  if (static_cast<std::size_t>(basis_.rows()) != expected) {
    throw Error(ErrorCode::DimensionMismatch, "projector basis rows do not match the space");
  }
}

std::size_t Projector::rank() const noexcept {
  const auto cols = static_cast<std::size_t>(basis_.cols());
  if (!subsystem_) return cols;
  const SubsystemLayout layout = subsystem_layout(dims_, *subsystem_);
  return cols * layout.left * layout.right;
}

CVector Projector::apply(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "projector applied to a vector of the wrong size");
  }
  if (!subsystem_) return basis_ * (basis_.adjoint() * v);

  const SubsystemLayout layout = subsystem_layout(dims_, *subsystem_);
  CVector out = CVector::Zero(v.size());
  CVector slice(as_index(layout.local));
  for (std::size_t l = 0; l < layout.left; ++l) {
    for (std::size_t r = 0; r < layout.right; ++r) {
      for (std::size_t k = 0; k < layout.local; ++k) {
        slice(as_index(k)) = v(as_index((l * layout.local + k) * layout.right + r));
      }
      const CVector projected = basis_ * (basis_.adjoint() * slice);
      for (std::size_t k = 0; k < layout.local; ++k) {
        out(as_index((l * layout.local + k) * layout.right + r)) = projected(as_index(k));
      }
    }
  }
  return out;
}

CMatrix Projector::dense() const {
  const CMatrix local = basis_ * basis_.adjoint();
  if (!subsystem_) return local;
  const SubsystemLayout layout = subsystem_layout(dims_, *subsystem_);
  return kron(kron(CMatrix::Identity(as_index(layout.left), as_index(layout.left)), local),
              CMatrix::Identity(as_index(layout.right), as_index(layout.right)));
}

// ------------------------------------------------------ SpectralDecomposition

bool SpectralDecomposition::degenerate() const noexcept {
  return std::any_of(multiplicities.begin(), multiplicities.end(), [](std::size_t m) { return m > 1; });
}

CMatrix SpectralDecomposition::projector(std::size_t i) const {
  const CMatrix& v = eigenspaces.at(i);
  return v * v.adjoint();
}

CMatrix SpectralDecomposition::reconstruct() const {
  if (eigenspaces.empty()) return {};
  const Index n = eigenspaces.front().rows();
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) out += eigenvalues[i] * projector(i);
  return out;
}

std::optional<std::size_t> SpectralDecomposition::find(double value) const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues[i] - value) <= kDegenTol) return i;
  }
  return std::nullopt;
}

double hermiticity_defect(const CMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) return std::numeric_limits<double>::infinity();
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

SpectralDecomposition spectral_decompose(const CMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  if (matrix.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  if (!matrix.allFinite()) throw Error(ErrorCode::NotHermitian, "non-finite entry");
  const double defect = hermiticity_defect(matrix);
  if (defect > kHermTol) {
    throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| = " + std::to_string(defect));
  }
  if (is_exactly_diagonal(matrix)) return decompose_diagonal(matrix);

  const CMatrix symmetric = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotHermitian, "eigensolver did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  return cluster(std::vector<double>(values.data(), values.data() + values.size()), solver.eigenvectors());
}

// ----------------------------------------------------------------- Observable

Observable::Observable(CMatrix matrix, Dims dims, std::shared_ptr<const SpectralDecomposition> spectrum)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), spectrum_(std::move(spectrum)) {}

Observable::Observable(CMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  check_dims_match(static_cast<std::size_t>(matrix_.rows()), dims_, kMaxObservableDimension, "observable");
  spectrum_ = std::make_shared<const SpectralDecomposition>(spectral_decompose(matrix_));
}

Observable Observable::from_decomposition(CMatrix matrix, Dims dims, SpectralDecomposition decomposition) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorCode::NotHermitian, "matrix is not square");
  check_dims_match(static_cast<std::size_t>(matrix.rows()), dims, kMaxObservableDimension, "observable");
  const double defect = hermiticity_defect(matrix);
  if (defect > kHermTol) {
    throw Error(ErrorCode::NotHermitian, "max |M - M^dagger| = " + std::to_string(defect));
  }
  return Observable(std::move(matrix), std::move(dims),
                    std::make_shared<const SpectralDecomposition>(std::move(decomposition)));
}

Observable Observable::identity(Dims dims) {
  const auto n = as_index(total_dimension(dims));
  return Observable(CMatrix::Identity(n, n), std::move(dims));
}

Observable Observable::diagonal(const std::vector<double>& values, Dims dims) {
  const auto n = as_index(values.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return Observable(std::move(m), std::move(dims));
}

// ------------------------------------------------------------ tensor products

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron_vector(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {
Dims concat(const Dims& a, const Dims& b) {
  Dims out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}
}  // namespace

StateVector tensor_state(const StateVector& a, const StateVector& b) {
  return StateVector(kron_vector(a.amplitudes(), b.amplitudes()), concat(a.dims(), b.dims()));
}

Observable tensor_op(const Observable& a, const Observable& b) {
  return Observable(kron(a.matrix(), b.matrix()), concat(a.dims(), b.dims()));
}

double overlap(const StateVector& a, const StateVector& b) {
  if (a.dims() != b.dims()) throw Error(ErrorCode::DimensionMismatch, "overlap of states with different dims");
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

bool phase_equal(const StateVector& a, const StateVector& b, double tol) {
  return overlap(a, b) >= 1.0 - tol;
}

}  // namespace postsim
