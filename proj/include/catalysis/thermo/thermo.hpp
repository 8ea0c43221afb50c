#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "catalysis/statekit/density_matrix.hpp"
#include "catalysis/statekit/entropy.hpp"

namespace catalysis {

/// Hermitian energy operator with a cached ascending eigendecomposition.
class Hamiltonian {
 public:
  explicit Hamiltonian(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) throw ValidationError("Hamiltonian: matrix must be square and non-empty");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian) {
      throw ValidationError("Hamiltonian: not Hermitian within 1e-10");
    }
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
    if (solver.info() != Eigen::Success) throw EigensolverError("Hamiltonian: eigensolver failed to converge");
    energies_.resize(static_cast<std::size_t>(matrix_.rows()));
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) energies_[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    vectors_ = solver.eigenvectors();
  }

  static Hamiltonian diagonal(const std::vector<double>& energies) {
    const auto d = static_cast<Eigen::Index>(energies.size());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = energies[static_cast<std::size_t>(i)];
    return Hamiltonian(std::move(m));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return energies_.size(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
  /// Ascending.
  [[nodiscard]] const std::vector<double>& energies() const noexcept { return energies_; }
  [[nodiscard]] const Matrix& eigenvectors() const noexcept { return vectors_; }

  [[nodiscard]] std::size_t ground_degeneracy(double tolerance = 1e-10) const {
    std::size_t g = 0;
    for (double e : energies_) g += (e - energies_.front() <= tolerance) ? 1 : 0;
    return g;
  }

 private:
  Matrix matrix_;
  std::vector<double> energies_;
  Matrix vectors_;
};

struct GibbsState {
  /// +infinity for the normalized ground-space projector.
  double beta = 0.0;
  /// Populations on the ascending energy levels.
  std::vector<double> populations;
  DensityMatrix state;
};

inline double energy(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.dimension() != h.dimension()) throw DimensionMismatch("energy: state and Hamiltonian dimensions differ");
  return (rho.matrix() * h.matrix()).trace().real();
}

/// Minimum energy over unitary orbits: descending spectrum against ascending energies.
inline double passive_energy(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.dimension() != h.dimension()) throw DimensionMismatch("passive_energy: state and Hamiltonian dimensions differ");
  const auto lam = rho.eigenvalues();
  double e = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) e += lam[i] * h.energies()[i];
  return e;
}

inline double ergotropy(const DensityMatrix& rho, const Hamiltonian& h) { return energy(rho, h) - passive_energy(rho, h); }

inline bool is_passive(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.dimension() != h.dimension()) throw DimensionMismatch("is_passive: state and Hamiltonian dimensions differ");
  const Matrix comm = rho.matrix() * h.matrix() - h.matrix() * rho.matrix();
  if (comm.cwiseAbs().maxCoeff() > 1e-9) return false;
  return std::abs(energy(rho, h) - passive_energy(rho, h)) <= 1e-9;
}

namespace detail {

inline std::vector<double> gibbs_populations(const Hamiltonian& h, double beta) {
  const auto& e = h.energies();
  std::vector<double> p(e.size(), 0.0);
  if (std::isinf(beta)) {
    const std::size_t g = h.ground_degeneracy();
    for (std::size_t i = 0; i < g; ++i) p[i] = 1.0 / static_cast<double>(g);
    return p;
  }
  double z = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) z += (p[i] = std::exp(-beta * (e[i] - e.front())));
  for (double& x : p) x /= z;
  return p;
}

}  // namespace detail

inline GibbsState gibbs_state(const Hamiltonian& h, double beta) {
  if (std::isnan(beta) || beta < 0.0) throw ValidationError("gibbs_state: beta must be >= 0 or +infinity");
  GibbsState out;
  out.beta = beta;
  out.populations = detail::gibbs_populations(h, beta);
  out.state = DensityMatrix::from_spectrum(out.populations, h.eigenvectors());
  return out;
}

namespace detail {

inline double gibbs_entropy(const Hamiltonian& h, double beta) { return shannon_entropy(gibbs_populations(h, beta)); }

inline double gibbs_energy(const Hamiltonian& h, const GibbsState& g) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.populations.size(); ++i) e += g.populations[i] * h.energies()[i];
  return e;
}

}  // namespace detail

/// Inverse temperature whose Gibbs state has the entropy of rho.
inline double solve_beta(const DensityMatrix& rho, const Hamiltonian& h) {
  if (rho.dimension() != h.dimension()) throw DimensionMismatch("solve_beta: state and Hamiltonian dimensions differ");
  const double target = von_neumann_entropy(rho);
  const double d = static_cast<double>(h.dimension());
  if (target > std::log(d) + 1e-9) throw ValidationError("solve_beta: entropy exceeds ln d");
  if (target >= detail::gibbs_entropy(h, 0.0) - 1e-10) return 0.0;
  const double floor_entropy = std::log(static_cast<double>(h.ground_degeneracy()));
  if (target < floor_entropy - 1e-9) {
    throw ValidationError("solve_beta: entropy below ln(ground degeneracy); no Gibbs state matches");
  }
  if (target <= floor_entropy + 1e-10) return std::numeric_limits<double>::infinity();

  double lo = 0.0;
  double hi = 1.0;
  while (detail::gibbs_entropy(h, hi) >= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return std::numeric_limits<double>::infinity();
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double s = detail::gibbs_entropy(h, mid);
    if (std::abs(s - target) <= 1e-10) return mid;
    (s > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Tr[rho H] - Tr[omega_beta(rho) H].
inline double asymptotic_work(const DensityMatrix& rho, const Hamiltonian& h) {
  const auto g = gibbs_state(h, solve_beta(rho, h));
  return energy(rho, h) - detail::gibbs_energy(h, g);
}

struct CatalyticWork {
  double value = 0.0;
  double asymptotic = 0.0;
  double beta = 0.0;
  double energy = 0.0;
  double gibbs_energy = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  /// Smallest sampled Tr[rho' H] - Tr[omega H]; negative beyond 1e-7 falsifies.
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
};

namespace detail {

inline Matrix haar_unitary(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(d);
  Matrix z(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Complex r = qr.matrixQR()(i, i);
    if (std::abs(r) > 0.0) q.col(i) *= r / std::abs(r);
  }
  return q;
}

/// Random state with entropy >= floor: random spectrum and basis, pulled
/// toward I/d along a straight line when it starts below the floor.
inline Matrix sample_feasible(std::mt19937_64& rng, std::size_t d, double floor) {
  std::uniform_real_distribution<double> conc(0.05, 3.0);
  std::gamma_distribution<double> gamma(conc(rng), 1.0);
  std::vector<double> p(d);
  double s = 0.0;
  for (double& x : p) s += (x = gamma(rng));
  if (!(s > 0.0)) p.assign(d, 1.0), s = static_cast<double>(d);
  for (double& x : p) x /= s;
  const auto mixed = [&](double t) {
    std::vector<double> q(p);
    for (double& x : q) x = (1.0 - t) * x + t / static_cast<double>(d);
    return q;
  };
  std::vector<double> q = p;
  if (shannon_entropy(p) < floor) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (shannon_entropy(mixed(mid)) < floor ? lo : hi) = mid;
    }
    q = mixed(hi);
  }
  const Matrix u = haar_unitary(rng, d);
  RealVector lam(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) lam(static_cast<Eigen::Index>(i)) = q[i];
  return u * lam.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace detail

inline constexpr std::uint64_t default_work_seed = 20240917;

/// Sup of Tr[rho H] - Tr[rho' H] over rho' with S(rho') >= S(rho), evaluated in
/// closed form and checked against `samples` random feasible rho'.
inline CatalyticWork catalytic_work(const DensityMatrix& rho, const Hamiltonian& h, std::size_t samples = 1000,
                                    std::uint64_t seed = default_work_seed) {
  CatalyticWork out;
  out.beta = solve_beta(rho, h);
  out.energy = energy(rho, h);
  out.gibbs_energy = detail::gibbs_energy(h, gibbs_state(h, out.beta));
  out.asymptotic = out.energy - out.gibbs_energy;
  out.value = out.asymptotic;
  out.seed = seed;
  out.samples = samples;
  const double floor = von_neumann_entropy(rho);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Matrix s = detail::sample_feasible(rng, h.dimension(), floor);
    const double gap = (s * h.matrix()).trace().real() - out.gibbs_energy;
    out.min_gap = std::min(out.min_gap, gap);
    if (gap < -1e-7) ++out.violations;
  }
  return out;
}

}  // namespace catalysis
