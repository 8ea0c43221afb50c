#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "catalysis/catalysis.hpp"
#include "test_util.hpp"

using namespace catalysis;

namespace {

DensityMatrix diag_state(std::vector<double> p) { return DensityMatrix::diagonal(ProbabilityVector(std::move(p))); }

Hamiltonian random_hamiltonian(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> e(d);
  for (double& x : e) x = u(rng);
  const Matrix v = testkit::random_unitary(rng, d);
  RealVector lam(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) lam(static_cast<Eigen::Index>(i)) = e[i];
  return Hamiltonian(Matrix(v * lam.cast<Complex>().asDiagonal() * v.adjoint()));
}

}  // namespace

TEST(Hamiltonian, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(Hamiltonian{m}, ValidationError);
  EXPECT_EQ(Hamiltonian::diagonal({0.0, 0.0, 1.0}).ground_degeneracy(), 2u);
}

TEST(Gibbs, LimitsAndQubitExample) {
  const auto h = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  const auto hot = gibbs_state(h, 0.0);
  EXPECT_LE((hot.state.matrix() - Matrix(Matrix::Identity(3, 3) / 3.0)).cwiseAbs().maxCoeff(), 1e-12);
  const auto cold = gibbs_state(h, std::numeric_limits<double>::infinity());
  EXPECT_NEAR(cold.state.matrix()(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(cold.state.matrix().trace().real(), 1.0, 1e-15);

  const auto q = gibbs_state(Hamiltonian::diagonal({0.0, 1.0}), std::log(3.0));
  EXPECT_NEAR(q.populations[0], 0.75, 1e-12);
  EXPECT_NEAR(q.populations[1], 0.25, 1e-12);
  EXPECT_THROW(gibbs_state(h, -1.0), ValidationError);
}

TEST(Gibbs, MatchesMatrixExponential) {
  std::mt19937_64 rng(3);
  const auto h = random_hamiltonian(rng, 4);
  for (double beta : {0.1, 0.7, 2.5}) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    const RealVector w = (-beta * es.eigenvalues().array()).exp();
    Matrix expm = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    expm /= expm.trace();
    EXPECT_LE((gibbs_state(h, beta).state.matrix() - expm).cwiseAbs().maxCoeff(), 1e-10) << beta;
  }
}

TEST(Gibbs, EntropyAndEnergyMonotoneInBeta) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = random_hamiltonian(rng, 3 + static_cast<std::size_t>(trial % 3));
    double prev_s = std::numeric_limits<double>::infinity();
    double prev_e = std::numeric_limits<double>::infinity();
    for (double beta = 0.0; beta <= 20.0; beta += 0.25) {
      const auto g = gibbs_state(h, beta);
      const double s = von_neumann_entropy(g.state);
      const double e = energy(g.state, h);
      EXPECT_LT(s, prev_s + 1e-12);
      EXPECT_LE(e, prev_e + 1e-12);
      prev_s = s;
      prev_e = e;
    }
  }
}

TEST(Passivity, Examples) {
  const auto h = Hamiltonian::diagonal({0.0, 1.0});
  EXPECT_FALSE(is_passive(diag_state({0.1, 0.9}), h));
  EXPECT_TRUE(is_passive(diag_state({0.9, 0.1}), h));
  std::mt19937_64 rng(5);
  const auto hr = random_hamiltonian(rng, 3);
  for (double beta : {0.0, 0.3, 4.0}) EXPECT_TRUE(is_passive(gibbs_state(hr, beta).state, hr));
}

TEST(Passivity, MatchesBruteForcePairing) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const auto h = random_hamiltonian(rng, d);
    // Half the trials commute with H so that both verdicts occur.
    DensityMatrix rho = testkit::random_density(rng, d);
    if (trial % 2 == 0) {
      auto p = testkit::random_simplex(rng, d);
      rho = DensityMatrix::from_spectrum(p, h.eigenvectors());
    }
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    const auto lam = rho.eigenvalues();
    double best = std::numeric_limits<double>::infinity();
    do {
      double e = 0.0;
      for (std::size_t i = 0; i < d; ++i) e += lam[perm[i]] * h.energies()[i];
      best = std::min(best, e);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(passive_energy(rho, h), best, 1e-12);
    const Matrix comm = rho.matrix() * h.matrix() - h.matrix() * rho.matrix();
    const bool oracle = comm.cwiseAbs().maxCoeff() <= 1e-9 && std::abs(energy(rho, h) - best) <= 1e-9;
    EXPECT_EQ(is_passive(rho, h), oracle) << trial;
  }
}

TEST(SolveBeta, Examples) {
  const auto q = Hamiltonian::diagonal({0.0, 1.0});
  EXPECT_EQ(solve_beta(DensityMatrix::maximally_mixed(2), q), 0.0);
  EXPECT_TRUE(std::isinf(solve_beta(diag_state({1.0, 0.0}), q)));
  EXPECT_NEAR(solve_beta(diag_state({0.25, 0.75}), q), std::log(3.0), 1e-8);
}

TEST(SolveBeta, EntropyMatchOnRandomInputs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    const auto h = random_hamiltonian(rng, d);
    const auto rho = testkit::random_density(rng, d, 0.4);
    const double beta = solve_beta(rho, h);
    ASSERT_TRUE(std::isfinite(beta));
    EXPECT_NEAR(von_neumann_entropy(gibbs_state(h, beta).state), von_neumann_entropy(rho), 1e-9);
  }
}

TEST(SolveBeta, DegenerateGround) {
  const auto h = Hamiltonian::diagonal({0.0, 0.0, 1.0});
  EXPECT_THROW(solve_beta(diag_state({1.0, 0.0, 0.0}), h), ValidationError);
  EXPECT_TRUE(std::isinf(solve_beta(diag_state({0.5, 0.5, 0.0}), h)));
  const double beta = solve_beta(diag_state({0.5, 0.3, 0.2}), h);
  EXPECT_NEAR(von_neumann_entropy(gibbs_state(h, beta).state), shannon_entropy(std::vector<double>{0.5, 0.3, 0.2}), 1e-9);
}

TEST(AsymptoticWork, QutritExample) {
  const auto h = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  const auto rho = diag_state({0.5, 0.5, 0.0});
  EXPECT_NEAR(solve_beta(rho, h), 1.3261624300795465, 1e-8);
  EXPECT_NEAR(asymptotic_work(rho, h), 0.19575288423434606, 1e-9);
}

TEST(AsymptoticWork, GibbsIsZeroAndUnitaryInvariance) {
  std::mt19937_64 rng(29);
  const auto h = random_hamiltonian(rng, 3);
  for (double beta : {0.0, 0.5, 3.0}) EXPECT_NEAR(asymptotic_work(gibbs_state(h, beta).state, h), 0.0, 1e-9);
  const auto rho = testkit::random_density(rng, 3);
  const Matrix u = testkit::random_unitary(rng, 3);
  const DensityMatrix moved(Matrix(u * rho.matrix() * u.adjoint()));
  const double ref = energy(rho, h) - asymptotic_work(rho, h);
  const double ref_moved = energy(moved, h) - asymptotic_work(moved, h);
  EXPECT_NEAR(ref, ref_moved, 1e-9);
}

TEST(AsymptoticWork, DominatesErgotropy) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const auto h = random_hamiltonian(rng, d);
    const auto rho = testkit::random_density(rng, d, 0.5);
    const double w = asymptotic_work(rho, h);
    EXPECT_GE(w, -1e-9);
    EXPECT_GE(w, ergotropy(rho, h) - 1e-9);
  }
}

TEST(CatalyticWork, EqualsClosedFormAndSurvivesSampling) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = random_hamiltonian(rng, 3);
    const auto rho = testkit::random_density(rng, 3, 0.5);
    const auto w = catalytic_work(rho, h, 1000, 7 + static_cast<std::uint64_t>(trial));
    EXPECT_NEAR(w.value, asymptotic_work(rho, h), 1e-9);
    EXPECT_EQ(w.violations, 0u);
    EXPECT_GE(w.min_gap, -1e-7);
    EXPECT_EQ(w.samples, 1000u);
  }
  const auto h = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  EXPECT_NEAR(catalytic_work(gibbs_state(h, 0.8).state, h).value, 0.0, 1e-9);
}

TEST(CatalyticWork, DeterministicInSeed) {
  const auto h = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  const auto rho = diag_state({0.5, 0.5, 0.0});
  const auto a = catalytic_work(rho, h, 200, 99);
  const auto b = catalytic_work(rho, h, 200, 99);
  EXPECT_EQ(a.min_gap, b.min_gap);
  EXPECT_EQ(a.seed, 99u);
}

TEST(CatalyticWork, VariationalPrincipleOnEntropyShell) {
  std::mt19937_64 rng(41);
  const auto h = Hamiltonian::diagonal({0.0, 0.4, 1.3});
  const auto rho = diag_state({0.7, 0.2, 0.1});
  const double s = von_neumann_entropy(rho);
  const double ge = energy(rho, h) - asymptotic_work(rho, h);
  int on_shell = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const DensityMatrix sigma(detail::sample_feasible(rng, 3, s));
    if (std::abs(von_neumann_entropy(sigma) - s) > 1e-6) continue;
    ++on_shell;
    EXPECT_GE(energy(sigma, h), ge - 1e-9);
  }
  EXPECT_GT(on_shell, 100);
}
