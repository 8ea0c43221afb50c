#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace catalysis {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double negative_probability = 1e-12;
inline constexpr double normalization = 1e-10;
inline constexpr double hermitian = 1e-10;
inline constexpr double eigenvalue_floor = 1e-10;
inline constexpr double renormalize_trigger = 1e-12;
inline constexpr double unitary = 1e-9;
inline constexpr double majorization_slack = 1e-10;
inline constexpr double equal_entries = 1e-12;
inline constexpr double catalyst_residual = 1e-10;
inline constexpr double distance_slack = 1e-12;
}  // namespace tol

/// Upper bounds on dense representations. The constructions grow like d^n,
/// so every dense allocation is checked against these first.
struct DimensionCaps {
  std::size_t classical = std::size_t{1} << 20;
  std::size_t quantum = std::size_t{1} << 12;
};

class CatalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input failed a state or channel invariant.
class ValidationError : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class DimensionMismatch : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class DimensionCapExceeded : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class LayoutError : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class MajorizationError : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class EntropyGapError : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class DegenerateTruncation : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

class EigensolverError : public CatalysisError {
 public:
  using CatalysisError::CatalysisError;
};

inline void check_cap(std::size_t dimension, std::size_t cap, const std::string& what) {
  if (dimension > cap) {
    throw DimensionCapExceeded(what + ": dimension " + std::to_string(dimension) +
                               " exceeds cap " + std::to_string(cap));
  }
}

/// Overflow-checked integer power; saturates at SIZE_MAX.
inline std::size_t checked_pow(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > static_cast<std::size_t>(-1) / base) return static_cast<std::size_t>(-1);
    result *= base;
  }
  return result;
}

inline std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > static_cast<std::size_t>(-1) / a) return static_cast<std::size_t>(-1);
  return a * b;
}

}  // namespace catalysis
