#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "catalysis/catalysis.hpp"

namespace catalysis::testkit {

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t d, double concentration = 1.0) {
  std::gamma_distribution<double> g(concentration, 1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) s += (x = g(rng) + 1e-300);
  for (auto& x : v) x /= s;
  return v;
}

inline ProbabilityVector random_probability(std::mt19937_64& rng, std::size_t d, double concentration = 1.0) {
  return ProbabilityVector(random_simplex(rng, d, concentration));
}

inline Matrix random_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(d);
  Matrix z(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Complex phase = r(i, i) / std::abs(r(i, i));
    q.col(i) *= phase;
  }
  return q;
}

inline DensityMatrix random_density(std::mt19937_64& rng, std::size_t d, double concentration = 1.0) {
  const auto values = random_simplex(rng, d, concentration);
  return DensityMatrix::from_spectrum(values, random_unitary(rng, d));
}

inline DensityMatrix random_pure(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector psi(static_cast<Eigen::Index>(d));
  for (auto& x : psi) x = Complex(n(rng), n(rng));
  return DensityMatrix::pure(psi);
}

/// (w, w') with w majorizing w': w' is a random mixture of permutations of w.
inline std::pair<std::vector<double>, std::vector<double>> random_majorizing_pair(std::mt19937_64& rng, std::size_t d) {
  auto w = random_simplex(rng, d, 0.5);
  std::uniform_int_distribution<int> terms(1, 4);
  const int k = terms(rng);
  const auto weights = random_simplex(rng, static_cast<std::size_t>(k));
  std::vector<double> wp(d, 0.0);
  std::vector<std::size_t> perm(d);
  for (int a = 0; a < k; ++a) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < d; ++i) wp[perm[i]] += weights[static_cast<std::size_t>(a)] * w[i];
  }
  return {w, wp};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace catalysis::testkit
