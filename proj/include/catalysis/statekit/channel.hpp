#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "catalysis/statekit/density_matrix.hpp"

namespace catalysis {

inline void check_orthonormal(const Matrix& basis, const char* what) {
  if (basis.rows() != basis.cols()) throw ValidationError(std::string(what) + ": basis not square");
  if (!is_unitary(basis)) throw ValidationError(std::string(what) + ": basis not orthonormal within 1e-9");
}

/// Removes off-diagonal elements in the basis given by the columns of `basis`.
inline Matrix dephase(const Matrix& rho, const Matrix& basis) {
  Matrix in_basis = basis.adjoint() * rho * basis;
  Matrix diag = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < rho.rows(); ++i) diag(i, i) = in_basis(i, i).real();
  return basis * diag * basis.adjoint();
}

inline DensityMatrix apply_dephasing(const DensityMatrix& rho, const Matrix& basis) {
  if (basis.rows() != static_cast<Eigen::Index>(rho.dimension())) throw DimensionMismatch("apply_dephasing: basis dimension");
  check_orthonormal(basis, "apply_dephasing");
  return DensityMatrix(dephase(rho.matrix(), basis));
}

/// Clock unitaries sum_a exp(2 pi i k a / d) |e_a><e_a| for k = 0..d-1.
inline std::vector<Matrix> clock_unitaries(const Matrix& basis) {
  const Eigen::Index d = basis.rows();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    ComplexVector phases(d);
    for (Eigen::Index a = 0; a < d; ++a) {
      phases(a) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((k * a) % d) / static_cast<double>(d));
    }
    out.push_back(basis * phases.asDiagonal() * basis.adjoint());
  }
  return out;
}

/// Either dephasing in an orthonormal basis or a convex mixture of unitary conjugations.
class Channel {
 public:
  enum class Kind { dephasing, mixed_unitary };

  static Channel dephasing(Matrix basis) {
    check_orthonormal(basis, "dephasing channel");
    Channel c;
    c.kind_ = Kind::dephasing;
    c.basis_ = std::move(basis);
    return c;
  }

  static Channel mixed_unitary(std::vector<std::pair<double, Matrix>> components) {
    if (components.empty()) throw ValidationError("mixed-unitary channel: no components");
    double total = 0.0;
    const Eigen::Index d = components.front().second.rows();
    for (const auto& [p, u] : components) {
      if (p < -tol::negative_probability) throw ValidationError("mixed-unitary channel: negative weight");
      if (u.rows() != d || u.cols() != d) throw DimensionMismatch("mixed-unitary channel: component shapes differ");
      if (!is_unitary(u)) throw ValidationError("mixed-unitary channel: component not unitary within 1e-9");
      total += p;
    }
    if (std::abs(total - 1.0) > tol::normalization) throw ValidationError("mixed-unitary channel: weights do not sum to 1");
    Channel c;
    c.kind_ = Kind::mixed_unitary;
    c.components_ = std::move(components);
    return c;
  }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const Matrix& basis() const noexcept { return basis_; }

  [[nodiscard]] std::size_t dimension() const {
    return static_cast<std::size_t>(kind_ == Kind::dephasing ? basis_.rows() : components_.front().second.rows());
  }

  /// Mixed-unitary components; dephasing is expressed with uniform clock unitaries.
  [[nodiscard]] std::vector<std::pair<double, Matrix>> components() const {
    if (kind_ == Kind::mixed_unitary) return components_;
    std::vector<std::pair<double, Matrix>> out;
    const double w = 1.0 / static_cast<double>(basis_.rows());
    for (auto& u : clock_unitaries(basis_)) out.emplace_back(w, std::move(u));
    return out;
  }

  [[nodiscard]] Matrix apply(const Matrix& rho) const {
    if (rho.rows() != static_cast<Eigen::Index>(dimension())) throw DimensionMismatch("channel: state dimension");
    if (kind_ == Kind::dephasing) return dephase(rho, basis_);
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& [p, u] : components_) out += p * u * rho * u.adjoint();
    return out;
  }

  [[nodiscard]] DensityMatrix apply(const DensityMatrix& rho) const { return DensityMatrix(apply(rho.matrix())); }

 private:
  Channel() = default;

  Kind kind_ = Kind::dephasing;
  Matrix basis_;
  std::vector<std::pair<double, Matrix>> components_;
};

}  // namespace catalysis
