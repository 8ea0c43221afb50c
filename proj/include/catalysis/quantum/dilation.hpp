#pragma once

#include <vector>

#include "catalysis/statekit/channel.hpp"
#include "catalysis/statekit/composite.hpp"

namespace catalysis {

/// V = sum_i V_i (x) |i><i| on S x R together with the register state
/// sigma = sum_i p_i |i><i|, so that Tr_R[V (rho (x) sigma) V^dagger] = C[rho].
struct Dilation {
  Matrix unitary;
  DensityMatrix sigma;
  std::vector<Matrix> components;
  std::vector<double> weights;

  [[nodiscard]] std::size_t system_dimension() const { return static_cast<std::size_t>(components.front().rows()); }
  [[nodiscard]] std::size_t register_dimension() const { return components.size(); }
  [[nodiscard]] SubsystemLayout layout() const {
    return SubsystemLayout({system_dimension(), register_dimension()}, {"S", "R"});
  }
};

inline Matrix controlled_sum(const std::vector<Matrix>& components) {
  const auto d = components.front().rows();
  const auto m = static_cast<Eigen::Index>(components.size());
  Matrix v = Matrix::Zero(d * m, d * m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Matrix& u = components[static_cast<std::size_t>(r)];
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) v(a * m + r, b * m + r) = u(a, b);
    }
  }
  return v;
}

inline Dilation dilate_mixed_unitary(const Channel& channel) {
  Dilation out;
  std::vector<double> w;
  for (auto& [p, u] : channel.components()) {
    if (!is_unitary(u)) throw ValidationError("dilate_mixed_unitary: component is not unitary");
    w.push_back(p);
    out.components.push_back(std::move(u));
  }
  out.weights = w;
  out.unitary = controlled_sum(out.components);
  out.sigma = DensityMatrix::diagonal(ProbabilityVector(std::move(w)));
  return out;
}

}  // namespace catalysis
