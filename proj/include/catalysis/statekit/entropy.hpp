#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "catalysis/statekit/density_matrix.hpp"
#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis {

/// -sum p ln p in nats, with 0 ln 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

inline double shannon_entropy(const ProbabilityVector& p) { return shannon_entropy(p.entries()); }

inline double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(rho.eigenvalues()); }

/// Tr[rho (-ln rho - H)^2] over the nonzero part of the spectrum.
inline double surprisal_variance(std::span<const double> p) {
  const double h = shannon_entropy(p);
  double v = 0.0;
  for (double x : p) {
    if (x > 0.0) {
      const double s = -std::log(x) - h;
      v += x * s * s;
    }
  }
  return v < 0.0 ? 0.0 : v;
}

inline double surprisal_variance(const ProbabilityVector& p) { return surprisal_variance(p.entries()); }
inline double surprisal_variance(const DensityMatrix& rho) { return surprisal_variance(rho.eigenvalues()); }

/// Total-variation distance (1/2) sum |a_i - b_i|.
inline double trace_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("trace_distance: dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

inline double trace_distance(const ProbabilityVector& a, const ProbabilityVector& b) {
  return trace_distance(a.entries(), b.entries());
}

/// (1/2) sum of |eigenvalues| of a - b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("trace_distance: dimensions differ");
  Matrix diff = a - b;
  diff = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigensolverError("trace_distance: eigensolver failed");
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

}  // namespace catalysis
