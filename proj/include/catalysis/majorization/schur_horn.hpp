#pragma once

#include <cmath>
#include <vector>

#include "catalysis/majorization/majorization.hpp"
#include "catalysis/statekit/density_matrix.hpp"

namespace catalysis {

/// Two-level rotation realizing a T-transform on the diagonal:
/// |j> -> sqrt(t)|j> + sqrt(1-t)|k>, |k> -> -sqrt(1-t)|j> + sqrt(t)|k>.
inline Matrix rotation_matrix(std::size_t d, const TTransformStep& s) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix u = Matrix::Identity(n, n);
  const auto j = static_cast<Eigen::Index>(s.j);
  const auto k = static_cast<Eigen::Index>(s.k);
  const double c = std::sqrt(s.t);
  const double r = std::sqrt(1.0 - s.t);
  u(j, j) = c;
  u(k, j) = r;
  u(k, k) = c;
  u(j, k) = -r;
  return u;
}

/// Left-multiplies `m` by the rotation of step `s`, touching only rows j and k.
inline void rotate_rows(Matrix& m, const TTransformStep& s) {
  const auto j = static_cast<Eigen::Index>(s.j);
  const auto k = static_cast<Eigen::Index>(s.k);
  const double c = std::sqrt(s.t);
  const double r = std::sqrt(1.0 - s.t);
  const Eigen::RowVectorXcd rj = m.row(j);
  const Eigen::RowVectorXcd rk = m.row(k);
  m.row(j) = c * rj - r * rk;
  m.row(k) = r * rj + c * rk;
}

/// Product R_m ... R_1 of the step rotations (step 1 applied first).
inline Matrix rotation_product(std::size_t d, const std::vector<TTransformStep>& steps) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix r = Matrix::Identity(n, n);
  for (const auto& s : steps) rotate_rows(r, s);
  return r;
}

/// Unitary post * R_m ... R_1 * pre, with the rotations acting in the sorted
/// eigenbasis coordinates. `dense` caches the full product.
struct UnitaryPlan {
  std::size_t dimension = 1;
  std::vector<TTransformStep> steps;
  Matrix pre_rotation;
  Matrix post_rotation;
  Matrix dense;

  /// Recomputes the product from its factors.
  [[nodiscard]] Matrix realize() const {
    Matrix r = pre_rotation;
    for (const auto& s : steps) rotate_rows(r, s);
    return post_rotation * r;
  }
};

/// Plan for spectra given in sorted eigenbases: the columns of `basis` and
/// `basis_prime` are eigenvectors for the descending values.
inline UnitaryPlan schur_horn_from_spectra(const std::vector<double>& values, const Matrix& basis,
                                          const std::vector<double>& values_prime, const Matrix& basis_prime) {
  if (values.size() != values_prime.size()) throw DimensionMismatch("schur_horn_unitary: dimensions differ");
  UnitaryPlan plan;
  plan.dimension = values.size();
  plan.steps = t_transform_chain(values, values_prime);
  plan.pre_rotation = basis.adjoint();
  plan.post_rotation = basis_prime;
  plan.dense = plan.realize();
  return plan;
}

/// Unitary U such that U omega U^dagger has the spectrum of omega_prime on its
/// diagonal in the (sorted) eigenbasis of omega_prime.
inline UnitaryPlan schur_horn_unitary(const DensityMatrix& omega, const DensityMatrix& omega_prime) {
  if (omega.dimension() != omega_prime.dimension()) throw DimensionMismatch("schur_horn_unitary: dimensions differ");
  const auto s = omega.spectrum();
  const auto sp = omega_prime.spectrum();
  if (!majorizes(s.values, sp.values)) throw MajorizationError("schur_horn_unitary: spectrum does not majorize target");
  return schur_horn_from_spectra(s.values, s.vectors, sp.values, sp.vectors);
}

}  // namespace catalysis
