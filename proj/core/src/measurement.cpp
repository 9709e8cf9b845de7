#include "postsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

using Index = Eigen::Index;

Index as_index(std::size_t i) { return static_cast<Index>(i); }

void require_same_space(const Observable& a, const StateVector& psi) {
  if (a.dimension() != psi.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "observable dimension " + std::to_string(a.dimension()) +
                                                  " vs state dimension " + std::to_string(psi.dimension()));
  }
}

void require_index(std::size_t index, std::size_t count) {
  if (index >= count) {
    throw Error(ErrorCode::IndexOutOfRange,
                "eigenvalue index " + std::to_string(index) + " of " + std::to_string(count));
  }
}

MeasurementOutcome full_outcome(const Observable& a, const StateVector& psi, SemanticsMode mode,
                                std::size_t index, double probability) {
  const SpectralDecomposition& spectrum = a.spectrum();
  const CMatrix& eigenspace = spectrum.eigenspaces[index];
  if (probability < kZeroProbability) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "eigenvalue index " + std::to_string(index));
  }

  MeasurementOutcome out{
      .index = index,
      .eigenvalue = spectrum.eigenvalues[index],
      .probability = probability,
      .determined = false,
      .post_state = std::nullopt,
      .eigenprojector = Projector(eigenspace, psi.dims()),
      .lueders_state = std::nullopt,
      .subsystem_state = std::nullopt,
  };

  StateVector lueders =
      StateVector::normalized(eigenspace * (eigenspace.adjoint() * psi.amplitudes()), psi.dims());

  if (mode == SemanticsMode::Lueders) {
    out.determined = true;
    out.post_state = std::move(lueders);
  } else if (spectrum.multiplicities[index] == 1) {
    out.determined = true;
    out.post_state = StateVector::normalized(eigenspace.col(0), psi.dims()).phase_normalized();
  } else {
    out.lueders_state = std::move(lueders);
  }
  return out;
}

}  // namespace

std::string_view to_string(SemanticsMode mode) noexcept {
  switch (mode) {
    case SemanticsMode::StrictVonNeumann: return "von-neumann";
    case SemanticsMode::Lueders: return "lueders";
  }
  return "unknown";
}

SemanticsMode parse_semantics_mode(std::string_view text) {
  if (text == "von-neumann") return SemanticsMode::StrictVonNeumann;
  if (text == "lueders") return SemanticsMode::Lueders;
  throw Error(ErrorCode::ParseError, "unknown semantics mode '" + std::string(text) +
                                         "' (expected von-neumann or lueders)");
}

double born_probability(const Observable& a, std::size_t eigenvalue_index, const StateVector& psi) {
  require_same_space(a, psi);
  require_index(eigenvalue_index, a.spectrum().size());
  return (a.spectrum().eigenspaces[eigenvalue_index].adjoint() * psi.amplitudes()).squaredNorm();
}

std::vector<double> born_distribution(const Observable& a, const StateVector& psi) {
  require_same_space(a, psi);
  std::vector<double> out;
  out.reserve(a.spectrum().size());
  for (const CMatrix& eigenspace : a.spectrum().eigenspaces) {
    out.push_back((eigenspace.adjoint() * psi.amplitudes()).squaredNorm());
  }
  return out;
}

std::size_t sample_index(const std::vector<double>& probabilities, Rng& rng) {
  double total = 0.0;
  std::size_t last_live = probabilities.size();
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] >= kZeroProbability) {
      total += probabilities[i];
      last_live = i;
    }
  }
  if (last_live == probabilities.size()) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "distribution has no support");
  }
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] < kZeroProbability) continue;
    cumulative += probabilities[i];
    if (target < cumulative) return i;
  }
  return last_live;
}

MeasurementOutcome measure(const Observable& a, const StateVector& psi, SemanticsMode mode, Rng& rng) {
  const std::vector<double> probabilities = born_distribution(a, psi);
  const std::size_t index = sample_index(probabilities, rng);
  return full_outcome(a, psi, mode, index, probabilities[index]);
}

MeasurementOutcome measure_forced(const Observable& a, const StateVector& psi, SemanticsMode mode,
                                  std::size_t eigenvalue_index) {
  const double probability = born_probability(a, eigenvalue_index, psi);
  return full_outcome(a, psi, mode, eigenvalue_index, probability);
}

Observable lift(const Observable& a, std::size_t subsystem, const Dims& dims) {
  const SubsystemLayout layout = subsystem_layout(dims, subsystem);
  if (a.dimension() != layout.local) {
    throw Error(ErrorCode::DimensionMismatch, "local observable dimension " + std::to_string(a.dimension()) +
                                                  " vs subsystem dimension " + std::to_string(layout.local));
  }
  if (layout.left == 1 && layout.right == 1) {
    return Observable::from_decomposition(a.matrix(), dims, a.spectrum());
  }
  const CMatrix left = CMatrix::Identity(as_index(layout.left), as_index(layout.left));
  const CMatrix right = CMatrix::Identity(as_index(layout.right), as_index(layout.right));

  SpectralDecomposition lifted;
  for (std::size_t i = 0; i < a.spectrum().size(); ++i) {
    lifted.eigenvalues.push_back(a.spectrum().eigenvalues[i]);
    lifted.eigenspaces.push_back(kron(kron(left, a.spectrum().eigenspaces[i]), right));
    lifted.multiplicities.push_back(a.spectrum().multiplicities[i] * layout.left * layout.right);
  }
  return Observable::from_decomposition(kron(kron(left, a.matrix()), right), dims, std::move(lifted));
}

// --------------------------------------------------------- partial measurement

namespace {

// When every eigenvector is exactly a computational basis vector (diagonal
// observables), returns their positions; otherwise an empty vector.
std::vector<std::size_t> standard_basis_indices(const SpectralDecomposition& spectrum) {
  std::vector<std::size_t> indices;
  indices.reserve(spectrum.size());
  for (const CMatrix& space : spectrum.eigenspaces) {
    const auto column = space.col(0);
    std::optional<std::size_t> hit;
    for (Eigen::Index i = 0; i < column.size(); ++i) {
      if (column(i) == Complex(0.0)) continue;
      if (hit || column(i) != Complex(1.0)) return {};
      hit = static_cast<std::size_t>(i);
    }
    if (!hit) return {};
    indices.push_back(*hit);
  }
  return indices;
}

}  // namespace

PartialMeasurement::PartialMeasurement(const Observable& a, std::size_t subsystem, const StateVector& psi)
    : dims_(psi.dims()), subsystem_(subsystem), layout_(subsystem_layout(psi.dims(), subsystem)) {
  if (a.dimension() != layout_.local) {
    throw Error(ErrorCode::DimensionMismatch, "local observable dimension " + std::to_string(a.dimension()) +
                                                  " vs subsystem dimension " + std::to_string(layout_.local));
  }
  const SpectralDecomposition& spectrum = a.spectrum();
  if (spectrum.degenerate()) {
    throw Error(ErrorCode::DegenerateLocalObservable,
                "local observable has a degenerate spectrum on its own subsystem; measure the lifted observable");
  }
  eigenvalues_ = spectrum.eigenvalues;
  basis_index_ = standard_basis_indices(spectrum);
  if (basis_index_.empty()) {
    local_basis_.resize(as_index(layout_.local), as_index(spectrum.size()));
    for (std::size_t j = 0; j < spectrum.size(); ++j) local_basis_.col(as_index(j)) = spectrum.eigenspaces[j].col(0);
  }

  // Rearrange psi into a (local) x (left * right) matrix and contract.
  const std::size_t outer = layout_.left * layout_.right;
  CMatrix unfolded(as_index(layout_.local), as_index(outer));
  const CVector& amplitudes = psi.amplitudes();
  for (std::size_t l = 0; l < layout_.left; ++l) {
    for (std::size_t k = 0; k < layout_.local; ++k) {
      for (std::size_t r = 0; r < layout_.right; ++r) {
        unfolded(as_index(k), as_index(l * layout_.right + r)) =
            amplitudes(as_index((l * layout_.local + k) * layout_.right + r));
      }
    }
  }
  if (basis_index_.empty()) {
    components_ = local_basis_.adjoint() * unfolded;
  } else {
    components_.resize(as_index(basis_index_.size()), as_index(outer));
    for (std::size_t j = 0; j < basis_index_.size(); ++j) {
      components_.row(as_index(j)) = unfolded.row(as_index(basis_index_[j]));
    }
  }
  probabilities_.resize(spectrum.size());
  for (std::size_t j = 0; j < spectrum.size(); ++j) probabilities_[j] = components_.row(as_index(j)).squaredNorm();
}

MeasurementOutcome PartialMeasurement::outcome(std::size_t eigenvalue_index, SemanticsMode mode) const {
  require_index(eigenvalue_index, eigenvalues_.size());
  const double probability = probabilities_[eigenvalue_index];
  if (probability < kZeroProbability) {
    throw Error(ErrorCode::ZeroProbabilityBranch, "eigenvalue index " + std::to_string(eigenvalue_index));
  }
  CVector alpha;
  if (basis_index_.empty()) {
    alpha = local_basis_.col(as_index(eigenvalue_index));
  } else {
    alpha = CVector::Unit(as_index(layout_.local), as_index(basis_index_[eigenvalue_index]));
  }

  MeasurementOutcome out{
      .index = eigenvalue_index,
      .eigenvalue = eigenvalues_[eigenvalue_index],
      .probability = probability,
      .determined = false,
      .post_state = std::nullopt,
      .eigenprojector = Projector(CMatrix(alpha), dims_, subsystem_),
      .lueders_state = std::nullopt,
      .subsystem_state = StateVector::normalized(alpha, {layout_.local}).phase_normalized(),
  };

  // Lueders state |alpha_j> (x) phi_j re-inserted at the subsystem position.
  const double norm = std::sqrt(probability);
  CVector composite(as_index(layout_.left * layout_.local * layout_.right));
  for (std::size_t l = 0; l < layout_.left; ++l) {
    for (std::size_t k = 0; k < layout_.local; ++k) {
      for (std::size_t r = 0; r < layout_.right; ++r) {
        composite(as_index((l * layout_.local + k) * layout_.right + r)) =
            alpha(as_index(k)) * components_(as_index(eigenvalue_index), as_index(l * layout_.right + r)) / norm;
      }
    }
  }
  StateVector lueders = StateVector::normalized(std::move(composite), dims_);

  const bool complement_trivial = layout_.left * layout_.right == 1;
  if (mode == SemanticsMode::Lueders) {
    out.determined = true;
    out.post_state = std::move(lueders);
  } else if (complement_trivial) {
    out.determined = true;
    out.post_state = StateVector::normalized(alpha, dims_).phase_normalized();
  } else {
    out.lueders_state = std::move(lueders);
  }
  return out;
}

MeasurementOutcome PartialMeasurement::sample(SemanticsMode mode, Rng& rng) const {
  return outcome(sample_index(probabilities_, rng), mode);
}

MeasurementOutcome partial_measure(const Observable& a, std::size_t subsystem, const StateVector& psi,
                                   SemanticsMode mode, Rng& rng) {
  return PartialMeasurement(a, subsystem, psi).sample(mode, rng);
}

MeasurementOutcome partial_measure_forced(const Observable& a, std::size_t subsystem, const StateVector& psi,
                                          SemanticsMode mode, std::size_t eigenvalue_index) {
  return PartialMeasurement(a, subsystem, psi).outcome(eigenvalue_index, mode);
}

std::vector<double> partial_distribution(const Observable& a, std::size_t subsystem, const StateVector& psi) {
  return PartialMeasurement(a, subsystem, psi).probabilities();
}

// ----------------------------------------------------------------- refinement

RefinementObservable build_refinement(const Observable& a) {
  const SpectralDecomposition& spectrum = a.spectrum();
  const auto n = as_index(a.dimension());
  CMatrix basis(n, n);
  std::vector<double> value_map;
  value_map.reserve(static_cast<std::size_t>(n));

  // Modified Gram-Schmidt over the eigenvectors in spectrum order. Vectors from
  // different eigenspaces are already orthogonal up to rounding; the sweep
  // removes that residue as well as any drift inside an eigenspace.
  Index column = 0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const CMatrix& eigenspace = spectrum.eigenspaces[i];
    for (Index c = 0; c < eigenspace.cols(); ++c) {
      CVector v = eigenspace.col(c);
      for (Index prev = 0; prev < column; ++prev) v -= basis.col(prev).dot(v) * basis.col(prev);
      basis.col(column++) = v / v.norm();
      value_map.push_back(spectrum.eigenvalues[i]);
    }
  }

  Eigen::VectorXd labels(n);
  for (Index k = 0; k < n; ++k) labels(k) = static_cast<double>(k);
  CMatrix c_matrix = basis * labels.cast<Complex>().asDiagonal() * basis.adjoint();
  c_matrix = 0.5 * (c_matrix + c_matrix.adjoint()).eval();
  return RefinementObservable{Observable(std::move(c_matrix), a.dims()), std::move(value_map)};
}

RefinementCheck check_refinement(const Observable& a, const RefinementObservable& r) {
  RefinementCheck check;
  const SpectralDecomposition& c_spectrum = r.refinement.spectrum();
  check.refinement_nondegenerate = !c_spectrum.degenerate() && c_spectrum.size() == a.dimension();

  const CMatrix& am = a.matrix();
  const CMatrix& cm = r.refinement.matrix();
  check.commutator_norm = (am * cm - cm * am).cwiseAbs().maxCoeff();

  // f(C) = sum_k f(lambda_k(C)) P_k(C); C's eigenvalues are the labels 0..N-1.
  CMatrix f_of_c = CMatrix::Zero(am.rows(), am.cols());
  for (std::size_t k = 0; k < c_spectrum.size(); ++k) {
    const auto label = static_cast<long>(std::lround(c_spectrum.eigenvalues[k]));
    if (label < 0 || static_cast<std::size_t>(label) >= r.value_map.size()) {
      check.refinement_nondegenerate = false;
      continue;
    }
    f_of_c += r.value_map[static_cast<std::size_t>(label)] * c_spectrum.projector(k);
  }
  check.reconstruction_error = (f_of_c - am).cwiseAbs().maxCoeff();
  return check;
}

}  // namespace postsim
