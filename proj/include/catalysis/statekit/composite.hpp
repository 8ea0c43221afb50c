#pragma once

#include <string>
#include <vector>

#include "catalysis/statekit/density_matrix.hpp"
#include "catalysis/statekit/entropy.hpp"
#include "catalysis/statekit/layout.hpp"
#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis {

inline std::vector<double> kron(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline ProbabilityVector tensor(const ProbabilityVector& a, const ProbabilityVector& b,
                                std::size_t cap = DimensionCaps{}.classical) {
  check_cap(checked_mul(a.dimension(), b.dimension()), cap, "tensor");
  return ProbabilityVector(kron(a.entries(), b.entries()));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, std::size_t cap = DimensionCaps{}.quantum) {
  check_cap(checked_mul(a.dimension(), b.dimension()), cap, "tensor");
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

/// n-fold tensor power of raw entries; n = 0 gives the trivial vector (1).
inline std::vector<double> power_entries(std::span<const double> p, std::size_t n,
                                         std::size_t cap = DimensionCaps{}.classical) {
  check_cap(checked_pow(p.size(), n), cap, "power");
  std::vector<double> out{1.0};
  for (std::size_t i = 0; i < n; ++i) out = kron(out, p);
  return out;
}

inline ProbabilityVector power(const ProbabilityVector& p, std::size_t n, std::size_t cap = DimensionCaps{}.classical) {
  return ProbabilityVector(power_entries(p.entries(), n, cap));
}

inline Matrix power_matrix(const Matrix& m, std::size_t n, std::size_t cap = DimensionCaps{}.quantum) {
  check_cap(checked_pow(static_cast<std::size_t>(m.rows()), n), cap, "power");
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = kron(out, m);
  return out;
}

inline DensityMatrix power(const DensityMatrix& rho, std::size_t n, std::size_t cap = DimensionCaps{}.quantum) {
  return DensityMatrix(power_matrix(rho.matrix(), n, cap));
}

/// Sums out the factors not in `keep` (classical marginal).
inline std::vector<double> marginal(std::span<const double> joint, const SubsystemLayout& layout,
                                    const std::vector<bool>& keep) {
  layout.check_dimension(joint.size(), "marginal");
  const auto split = detail::split_indices(layout.dims(), keep);
  std::vector<double> out(split.kept_dim, 0.0);
  for (std::size_t i = 0; i < joint.size(); ++i) out[split.kept[i]] += joint[i];
  return out;
}

inline ProbabilityVector partial_trace(const ProbabilityVector& joint, const SubsystemLayout& layout,
                                       const std::vector<std::string>& keep) {
  return ProbabilityVector(marginal(joint.entries(), layout, layout.mask(keep)));
}

/// Reduced matrix on the factors flagged in `keep`.
inline Matrix partial_trace_matrix(const Matrix& joint, const SubsystemLayout& layout, const std::vector<bool>& keep) {
  layout.check_dimension(static_cast<std::size_t>(joint.rows()), "partial_trace");
  const auto split = detail::split_indices(layout.dims(), keep);
  std::vector<std::size_t> full(split.kept_dim * split.traced_dim);
  for (std::size_t i = 0; i < full.size(); ++i) full[split.kept[i] * split.traced_dim + split.traced[i]] = i;
  const auto kd = static_cast<Eigen::Index>(split.kept_dim);
  Matrix out = Matrix::Zero(kd, kd);
  for (std::size_t a = 0; a < split.kept_dim; ++a) {
    for (std::size_t b = 0; b < split.kept_dim; ++b) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < split.traced_dim; ++t) {
        s += joint(static_cast<Eigen::Index>(full[a * split.traced_dim + t]),
                   static_cast<Eigen::Index>(full[b * split.traced_dim + t]));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& joint, const SubsystemLayout& layout,
                                   const std::vector<std::string>& keep) {
  return DensityMatrix(partial_trace_matrix(joint.matrix(), layout, layout.mask(keep)));
}

namespace detail {

inline void check_bipartition(const SubsystemLayout& layout, const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  std::vector<int> seen(layout.factors(), 0);
  for (const auto& l : a) ++seen[layout.index_of(l)];
  for (const auto& l : b) ++seen[layout.index_of(l)];
  for (int s : seen) {
    if (s != 1) throw LayoutError("mutual_information: partition must cover every factor exactly once");
  }
}

}  // namespace detail

/// H(A) + H(B) - H(AB) for a bipartition of the layout's factors.
inline double mutual_information(const ProbabilityVector& joint, const SubsystemLayout& layout,
                                 const std::vector<std::string>& a, const std::vector<std::string>& b) {
  detail::check_bipartition(layout, a, b);
  const double ha = shannon_entropy(marginal(joint.entries(), layout, layout.mask(a)));
  const double hb = shannon_entropy(marginal(joint.entries(), layout, layout.mask(b)));
  return ha + hb - shannon_entropy(joint);
}

inline double mutual_information(const DensityMatrix& joint, const SubsystemLayout& layout,
                                 const std::vector<std::string>& a, const std::vector<std::string>& b) {
  detail::check_bipartition(layout, a, b);
  const double ha = von_neumann_entropy(partial_trace(joint, layout, a));
  const double hb = von_neumann_entropy(partial_trace(joint, layout, b));
  return ha + hb - von_neumann_entropy(joint);
}

}  // namespace catalysis
