#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "catalysis/core.hpp"
#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis {

/// Eigenvalues in descending order with the matching eigenvectors as columns.
struct Spectrum {
  std::vector<double> values;
  Matrix vectors;
};

/// Hermitian eigendecomposition. Ties are ordered by the solver's column
/// index, which for diagonal input is the original basis index.
inline Spectrum eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw EigensolverError("eigh: eigensolver failed to converge");
  const auto& evals = solver.eigenvalues();
  const auto n = static_cast<std::size_t>(evals.size());
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = evals(static_cast<Eigen::Index>(i));
  // Eigen returns ascending values; reorder descending, stable in the solver's index.
  auto order = descending_order(raw);
  if (m.rows() > 0 && m.isDiagonal(0.0)) {
    // For exactly diagonal input, tie-break by the original basis index.
    std::vector<std::pair<double, std::size_t>> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = {m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), i};
    std::stable_sort(diag.begin(), diag.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    Spectrum s;
    s.values.resize(n);
    s.vectors = Matrix::Zero(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i) {
      s.values[i] = diag[i].first;
      s.vectors(static_cast<Eigen::Index>(diag[i].second), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return s;
  }
  Spectrum s;
  s.values.resize(n);
  s.vectors.resize(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    s.values[i] = raw[order[i]];
    s.vectors.col(static_cast<Eigen::Index>(i)) = solver.eigenvectors().col(static_cast<Eigen::Index>(order[i]));
  }
  return s;
}

/// Clamps eigenvalues in [-1e-10, 0) to zero and renormalizes only when the
/// total drifts from 1 by more than 1e-12.
inline std::vector<double> clamp_spectrum(std::vector<double> values) {
  double total = 0.0;
  for (double& v : values) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    total += v;
  }
  if (total > 0.0 && std::abs(total - 1.0) > tol::renormalize_trigger) {
    for (double& v : values) v /= total;
  }
  return values;
}

/// Quantum state: Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
 public:
  DensityMatrix() : matrix_(Matrix::Identity(1, 1)) {}

  explicit DensityMatrix(Matrix m) : matrix_(std::move(m)) { validate(); }

  static DensityMatrix maximally_mixed(std::size_t dimension) {
    if (dimension == 0) throw ValidationError("maximally_mixed: dimension must be positive");
    const auto d = static_cast<Eigen::Index>(dimension);
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(dimension));
  }

  static DensityMatrix diagonal(const ProbabilityVector& p) {
    const auto d = static_cast<Eigen::Index>(p.dimension());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw ValidationError("pure: zero vector");
    const ComplexVector v = psi / norm;
    return DensityMatrix(v * v.adjoint());
  }

  /// Builds V diag(values) V^dagger.
  static DensityMatrix from_spectrum(const std::vector<double>& values, const Matrix& basis) {
    const auto d = static_cast<Eigen::Index>(values.size());
    if (basis.rows() != d || basis.cols() != d) throw DimensionMismatch("from_spectrum: basis shape");
    RealVector lam(d);
    for (Eigen::Index i = 0; i < d; ++i) lam(i) = values[static_cast<std::size_t>(i)];
    Matrix m = basis * lam.cast<Complex>().asDiagonal() * basis.adjoint();
    return DensityMatrix(0.5 * (m + m.adjoint()));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }

  /// Descending, clamped spectrum with eigenvectors; computed on demand.
  [[nodiscard]] Spectrum spectrum() const {
    Spectrum s = eigh(matrix_);
    s.values = clamp_spectrum(std::move(s.values));
    return s;
  }

  [[nodiscard]] std::vector<double> eigenvalues() const { return spectrum().values; }

  [[nodiscard]] std::vector<double> diagonal_in(const Matrix& basis) const {
    std::vector<double> out(dimension());
    for (Eigen::Index i = 0; i < basis.cols(); ++i) {
      out[static_cast<std::size_t>(i)] = (basis.col(i).adjoint() * matrix_ * basis.col(i))(0, 0).real();
    }
    return out;
  }

 private:
  void validate() {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) throw ValidationError("density matrix: not square");
    if (!matrix_.allFinite()) throw ValidationError("density matrix: non-finite entries");
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermitian) throw ValidationError("density matrix: not Hermitian (" + std::to_string(herm) + ")");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::normalization) throw ValidationError("density matrix: trace " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigensolverError("density matrix: eigensolver failed");
    const double min_eval = solver.eigenvalues().minCoeff();
    if (min_eval < -tol::eigenvalue_floor) {
      throw ValidationError("density matrix: negative eigenvalue " + std::to_string(min_eval));
    }
  }

  Matrix matrix_;
};

inline bool is_unitary(const Matrix& u, double tolerance = tol::unitary) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

inline double unitarity_residual(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace catalysis
