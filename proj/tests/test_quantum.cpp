#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "catalysis/catalysis.hpp"
#include "test_util.hpp"

using namespace catalysis;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

/// V on S x R embedded into S x Sbar x R.
Matrix embed_dilation(const Dilation& dil, std::size_t bystander) {
  const auto d = static_cast<Eigen::Index>(dil.system_dimension());
  const auto m = static_cast<Eigen::Index>(dil.register_dimension());
  const auto b = static_cast<Eigen::Index>(bystander);
  Matrix out = Matrix::Zero(d * b * m, d * b * m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Matrix& v = dil.components[static_cast<std::size_t>(r)];
    for (Eigen::Index s1 = 0; s1 < d; ++s1) {
      for (Eigen::Index s0 = 0; s0 < d; ++s0) {
        for (Eigen::Index k = 0; k < b; ++k) out((s1 * b + k) * m + r, (s0 * b + k) * m + r) = v(s1, s0);
      }
    }
  }
  return out;
}

QuantumCatalyst forced(const DensityMatrix& rho, const DensityMatrix& rp, std::size_t n) {
  QuantumOptions o;
  o.forced_n = n;
  return build_quantum_catalyst(rho, rp, o);
}

}  // namespace

TEST(Dilation, SingleComponent) {
  std::mt19937_64 rng(1);
  const Matrix u = testkit::random_unitary(rng, 3);
  const auto dil = dilate_mixed_unitary(Channel::mixed_unitary({{1.0, u}}));
  EXPECT_EQ(dil.register_dimension(), 1u);
  EXPECT_LE(max_abs(dil.unitary - u), 1e-15);
  EXPECT_NEAR(dil.sigma.matrix()(0, 0).real(), 1.0, 1e-15);
}

TEST(Dilation, QubitDephasing) {
  const Matrix z = diag({1.0, -1.0});
  const auto dil = dilate_mixed_unitary(Channel::dephasing(Matrix::Identity(2, 2)));
  Matrix expected = Matrix::Zero(4, 4);
  // 1 (x) |1><1| + Z (x) |2><2| with R fastest.
  expected(0, 0) = 1.0;
  expected(2, 2) = 1.0;
  expected(1, 1) = 1.0;
  expected(3, 3) = -1.0;
  EXPECT_LE(max_abs(dil.unitary - expected), 1e-15);
  EXPECT_LE(max_abs(dil.sigma.matrix() - Matrix(Matrix::Identity(2, 2) / 2.0)), 1e-15);
  EXPECT_LE(max_abs(dil.components[1] - z), 1e-15);
}

TEST(Dilation, ReproducesChannelAndLeavesBystanderUncorrelated) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const Matrix basis = testkit::random_unitary(rng, d);
    const Channel ch = (trial % 3 == 0) ? Channel::dephasing(basis)
                                        : Channel::mixed_unitary({{0.3, testkit::random_unitary(rng, d)},
                                                                  {0.7, testkit::random_unitary(rng, d)}});
    const auto dil = dilate_mixed_unitary(ch);
    const auto rho = testkit::random_density(rng, d);
    const Matrix joint = dil.unitary * kron(rho.matrix(), dil.sigma.matrix()) * dil.unitary.adjoint();
    const Matrix reduced = partial_trace_matrix(joint, dil.layout(), {true, false});
    EXPECT_LE(max_abs(reduced - ch.apply(rho.matrix())), 1e-10);

    const std::size_t b = 2;
    const auto rho_ssbar = testkit::random_density(rng, d * b);
    const Matrix v = embed_dilation(dil, b);
    const Matrix out = v * kron(rho_ssbar.matrix(), dil.sigma.matrix()) * v.adjoint();
    const SubsystemLayout layout({d, b, dil.register_dimension()}, {"S", "Sbar", "R"});
    const Matrix rest = partial_trace_matrix(out, layout, {false, true, true});
    const Matrix sbar = partial_trace_matrix(rho_ssbar.matrix(), SubsystemLayout({d, b}, {"S", "Sbar"}), {false, true});
    EXPECT_LE(trace_distance(rest, kron(sbar, dil.sigma.matrix())), 1e-10);
  }
}

TEST(Dilation, ClockDephasingIsDiagonalInTarget) {
  std::mt19937_64 rng(9);
  for (std::size_t d : {2, 3, 4, 5}) {
    const Matrix basis = testkit::random_unitary(rng, d);
    const auto dil = dilate_mixed_unitary(Channel::dephasing(basis));
    const auto rho = testkit::random_density(rng, d);
    const Matrix joint = dil.unitary * kron(rho.matrix(), dil.sigma.matrix()) * dil.unitary.adjoint();
    const Matrix out = basis.adjoint() * partial_trace_matrix(joint, dil.layout(), {true, false}) * basis;
    Matrix off = out;
    off.diagonal().setZero();
    EXPECT_LE(max_abs(off), 1e-12) << d;
    const Matrix in = basis.adjoint() * rho.matrix() * basis;
    EXPECT_LE((out.diagonal() - in.diagonal()).cwiseAbs().maxCoeff(), 1e-12) << d;
  }
}

TEST(QuantumCatalyst, SigmaReconstructsFromIngredients) {
  const DensityMatrix rho(diag({0.9, 0.1}));
  const auto rp = DensityMatrix::maximally_mixed(2);
  const auto cat = forced(rho, rp, 4);
  const std::size_t n = 4;
  const Matrix chi = cat.u_major.dense * power_matrix(rho.matrix(), n) * cat.u_major.dense.adjoint();
  const SubsystemLayout sites(std::vector<std::size_t>(n, 2), {"1", "2", "3", "4"});
  Matrix expected = Matrix::Zero(8 * 4, 8 * 4);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> keep(n, false);
    for (std::size_t i = 0; i < n - k; ++i) keep[i] = true;
    const Matrix corr = (k == n) ? Matrix(Matrix::Identity(1, 1)) : partial_trace_matrix(chi, sites, keep);
    Matrix a = Matrix::Zero(4, 4);
    a(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k - 1)) = 1.0;
    expected += kron(kron(power_matrix(rho.matrix(), k - 1), corr), a) / static_cast<double>(n);
  }
  EXPECT_LE(max_abs(cat.sigma1() - expected), 1e-12);
  EXPECT_LE(max_abs(cat.sigma2() - Matrix(Matrix::Identity(2, 2) / 2.0)), 1e-12);
  EXPECT_LE(unitarity_residual(cat.w_unitary()), 1e-9);
  EXPECT_LE(unitarity_residual(cat.v_dephase()), 1e-9);
}

TEST(QuantumCatalyst, IsospectralBypass) {
  std::mt19937_64 rng(4);
  const auto rho = testkit::random_density(rng, 3);
  const Matrix u = testkit::random_unitary(rng, 3);
  const DensityMatrix rp(Matrix(u * rho.matrix() * u.adjoint()));
  const auto cat = forced(rho, rp, 3);
  EXPECT_TRUE(cat.bypass);
  EXPECT_EQ(cat.catalyst_dimension(), 1u);
  const auto run = apply_quantum_protocol(rho, cat);
  EXPECT_LE(run.report.output_distance, 1e-12);
  EXPECT_LE(run.report.catalyst_residual, 1e-12);
  EXPECT_TRUE(run.report.pass);
}

TEST(QuantumCatalyst, CommutingMatchesClassical) {
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> cases = {
      {{0.9, 0.1}, {0.7, 0.3}}, {{0.5, 0.5, 0.0}, {2.0 / 3, 1.0 / 6, 1.0 / 6}}};
  for (const auto& [p, pp] : cases) {
    for (std::size_t n = 2; checked_pow(p.size(), n) * n * p.size() <= 4096 && n <= 8; ++n) {
      const auto rho = DensityMatrix::diagonal(ProbabilityVector(p));
      const auto rp = DensityMatrix::diagonal(ProbabilityVector(pp));
      const auto run = apply_quantum_protocol(rho, forced(rho, rp, n));
      ClassicalOptions o;
      o.forced_n = n;
      auto [cat, perm] = build_classical_catalyst(ProbabilityVector(p), ProbabilityVector(pp), o);
      const auto expected = analytic_output(cat);
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        EXPECT_NEAR(run.report.output_matrix(ii, ii).real(), expected[i], 1e-9) << n;
      }
    }
  }
}

TEST(QuantumCatalyst, StageChecksOnRandomInstances) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const auto rho = testkit::random_density(rng, 2, 0.5);
    const auto rp = testkit::random_density(rng, 2, 4.0);
    if (von_neumann_entropy(rp) <= von_neumann_entropy(rho) + 1e-6) continue;
    for (std::size_t n : {2, 3, 4}) {
      const auto cat = forced(rho, rp, n);
      const auto run = apply_quantum_protocol(rho, cat);
      const auto& r = run.report;
      EXPECT_LE(r.catalyst_residual, 1e-10);
      EXPECT_LE(run.stage_a_residual, 1e-10);
      EXPECT_LE(run.chi_bar_residual, 1e-12);
      EXPECT_LE(run.r_marginal_residual, 1e-10);
      EXPECT_LE(run.dephased_residual, 1e-12);
      EXPECT_LE(r.output_distance, run.per_site_bound + 1e-12);
      EXPECT_LE(run.per_site_bound, cat.eps_certified + 1e-12);
      EXPECT_NEAR(r.entropy_out - r.entropy_in, r.mutual_information, 1e-8);
      EXPECT_GE(r.entropy_out, r.entropy_in - 1e-9);
      EXPECT_LE(r.spectrum_residual, 1e-9);
      EXPECT_TRUE(r.pass);
    }
  }
}

TEST(QuantumCatalyst, DephasedMarginalsCommuteWithTrace) {
  std::mt19937_64 rng(8);
  const auto rho = testkit::random_density(rng, 2, 0.5);
  const auto rp = DensityMatrix::maximally_mixed(2);
  const auto cat = forced(rho, rp, 8);
  const std::size_t n = cat.n;
  const Matrix qn = power_matrix(cat.basis_prime, n);
  const Matrix dephased = dephase(cat.chi, qn);
  const auto direct = site_marginals(dephased, 2, n);
  const auto sites = site_marginals(cat.chi, 2, n);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_LE(max_abs(dephase(sites[k], cat.basis_prime) - direct[k]), 1e-10) << k;
  }
}

TEST(QuantumCatalyst, DenseAndBlockRoutesAgree) {
  std::mt19937_64 rng(12);
  const auto rho = testkit::random_density(rng, 2, 0.5);
  const auto rp = testkit::random_density(rng, 2, 4.0);
  ASSERT_GT(von_neumann_entropy(rp), von_neumann_entropy(rho));
  for (std::size_t n : {1, 2, 3}) {
    const auto cat = forced(rho, rp, n);
    const Matrix u = cat.composed();
    EXPECT_LE(unitarity_residual(u), 1e-9);
    const auto dense = verify_definition1(rho, rp, DensityMatrix(cat.catalyst_state()), u, cat.eps_certified);
    const auto structured = verify_definition1(rho, rp, cat, 0.0);
    EXPECT_LE(max_abs(dense.output_matrix - structured.output_matrix), 1e-12);
    EXPECT_NEAR(dense.catalyst_residual, structured.catalyst_residual, 1e-12);
    EXPECT_NEAR(dense.mutual_information, structured.mutual_information, 1e-10);
    EXPECT_LE(dense.spectrum_residual, 1e-9);
    EXPECT_EQ(dense.pass, structured.pass);
    const auto run = apply_quantum_protocol(rho, cat);
    const Matrix joint = u * kron(rho.matrix(), cat.catalyst_state()) * u.adjoint();
    EXPECT_LE(max_abs(joint - run.joint.dense()), 1e-12);
  }
}

TEST(VerifyUnitary, ThreeLevelExample) {
  const DensityMatrix rho(diag({0.5, 0.5, 0.0}));
  const DensityMatrix rp(diag({2.0 / 3, 1.0 / 6, 1.0 / 6}));
  const DensityMatrix sigma(diag({2.0 / 3, 1.0 / 3}));
  // Joint index i * 2 + j.
  const std::size_t image[] = {0, 2, 1, 4, 3, 5};
  Matrix u = Matrix::Zero(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i) u(static_cast<Eigen::Index>(image[i]), i) = 1.0;
  const auto rep = verify_definition1(rho, rp, sigma, u, 0.0);
  EXPECT_LE(rep.catalyst_residual, 1e-12);
  EXPECT_LE(rep.output_distance, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(VerifyUnitary, IdentityPassesOnlyForSameState) {
  std::mt19937_64 rng(2);
  const auto rho = testkit::random_density(rng, 2);
  const auto other = testkit::random_density(rng, 2);
  const auto sigma = testkit::random_density(rng, 3);
  const Matrix id = Matrix::Identity(6, 6);
  EXPECT_TRUE(verify_definition1(rho, rho, sigma, id, 0.0).pass);
  EXPECT_FALSE(verify_definition1(rho, other, sigma, id, 0.0).pass);
}

TEST(QuantumCatalyst, Errors) {
  const DensityMatrix rho(diag({0.7, 0.3}));
  const DensityMatrix rp(diag({0.9, 0.1}));
  EXPECT_THROW(forced(rho, rp, 2), EntropyGapError);
  EXPECT_THROW(forced(rp, rho, 9), DimensionCapExceeded);
  QuantumOptions o;
  EXPECT_THROW(build_quantum_catalyst(rp, rho, o), ValidationError);
  EXPECT_THROW(forced(DensityMatrix::maximally_mixed(3), rho, 2), DimensionMismatch);
}
