// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "catalysis/catalysis.hpp"
#include "test_util.hpp"

using namespace catalysis;

namespace {

int failures = 0;

void line(int id, const char* name, bool ok, double seconds, const std::string& detail) {
  std::printf("[%s] %d %-28s %8.3f s  %s\n", ok ? "PASS" : "FAIL", id, name, seconds, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Matrix diag(std::initializer_list<double> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

void three_level_example() {
  Stopwatch clock;
  const DensityMatrix rho(diag({0.5, 0.5, 0.0}));
  const DensityMatrix rp(diag({2.0 / 3, 1.0 / 6, 1.0 / 6}));
  const DensityMatrix sigma(diag({2.0 / 3, 1.0 / 3}));
  // |0,1> <-> |1,0>, |1,1> <-> |2,0>, index i * 2 + j.
  const std::size_t image[] = {0, 2, 1, 4, 3, 5};
  Matrix u = Matrix::Zero(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i) u(static_cast<Eigen::Index>(image[i]), i) = 1.0;
  const auto rep = verify_definition1(rho, rp, sigma, u, 0.0);
  const double t = clock.lap();
  const bool ok = rep.pass && rep.catalyst_residual <= 1e-12 && rep.output_distance <= 1e-12 && t < 1.0;
  line(1, "three-level golden", ok, t, fmt("residual=%.3g distance=%.3g", rep.catalyst_residual, rep.output_distance));
}

struct GridRun {
  std::string label;
  TransitionReport report;
};

std::vector<GridRun> grid_runs;
std::vector<std::string> grid_skipped;
double grid_seconds = 0.0;

void run_grid() {
  Stopwatch clock;
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> classical = {
      {{0.9, 0.1}, {0.7, 0.3}},
      {{0.8, 0.2}, {0.55, 0.45}},
      {{0.5, 0.5, 0.0}, {2.0 / 3, 1.0 / 6, 1.0 / 6}},
      {{0.7, 0.2, 0.1}, {0.45, 0.35, 0.2}},
  };
  for (const auto& [p, pp] : classical) {
    for (std::size_t n = 2; n <= 6; ++n) {
      ClassicalOptions o;
      o.forced_n = n;
      const std::string label = "classical d=" + std::to_string(p.size()) + " n=" + std::to_string(n);
      try {
        auto [cat, perm] = build_classical_catalyst(ProbabilityVector(p), ProbabilityVector(pp), o);
        grid_runs.push_back({label, apply_protocol(ProbabilityVector(p), cat, perm).second});
      } catch (const DimensionCapExceeded&) {
        grid_skipped.push_back(label);
      }
    }
  }
  std::mt19937_64 rng(2024);
  std::vector<std::pair<DensityMatrix, DensityMatrix>> quantum = {
      {DensityMatrix(diag({0.9, 0.1})), DensityMatrix(Matrix(Matrix{{0.6, Complex(0.1, 0.05)}, {Complex(0.1, -0.05), 0.4}}))},
      {DensityMatrix(diag({0.9, 0.1})), DensityMatrix::maximally_mixed(2)},
  };
  quantum.emplace_back(testkit::random_density(rng, 2, 0.3), testkit::random_density(rng, 2, 5.0));
  for (const auto& [rho, rp] : quantum) {
    for (std::size_t n = 2; n <= 4; ++n) {
      QuantumOptions o;
      o.forced_n = n;
      const auto cat = build_quantum_catalyst(rho, rp, o);
      grid_runs.push_back({"quantum d=2 n=" + std::to_string(n), apply_quantum_protocol(rho, cat).report});
    }
  }
  grid_seconds = clock.lap();
}

void exact_catalysis() {
  double worst = 0.0;
  for (const auto& g : grid_runs) worst = std::max(worst, g.report.catalyst_residual);
  const bool ok = worst <= 1e-10 && grid_seconds < 120.0;
  std::string detail = fmt("instances=%.0f max residual=%.3g", static_cast<double>(grid_runs.size()), worst);
  if (!grid_skipped.empty()) {
    detail += "  over cap:";
    for (const auto& s : grid_skipped) detail += " [" + s + "]";
  }
  line(2, "exact catalysis grid", ok, grid_seconds, detail);
}

void entropy_necessity() {
  double drop = -1e300;
  double mi_gap = 0.0;
  for (const auto& g : grid_runs) {
    drop = std::max(drop, g.report.entropy_in - g.report.entropy_out);
    mi_gap = std::max(mi_gap, std::abs(g.report.entropy_out - g.report.entropy_in - g.report.mutual_information));
  }
  const bool ok = drop <= 1e-9 && mi_gap <= 1e-8;
  line(3, "entropy necessity", ok, 0.0, fmt("max H(in)-H(out)=%.3g max |dH - I|=%.3g", drop, mi_gap));
}

void error_monotonicity() {
  Stopwatch clock;
  const std::vector<std::size_t> grid = {2, 4, 6, 8};
  std::vector<double> eps;
  for (std::size_t n : grid) {
    ClassicalOptions o;
    o.forced_n = n;
    auto [cat, perm] = build_classical_catalyst(ProbabilityVector({0.9, 0.1}), ProbabilityVector({0.7, 0.3}), o);
    eps.push_back(apply_protocol(ProbabilityVector({0.9, 0.1}), cat, perm).second.output_distance);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < eps.size(); ++i) monotone = monotone && eps[i] <= eps[i - 1] + 1e-12;
  // Least-squares slope of ln(eps) against n over the last three grid points.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  bool finite = true;
  for (std::size_t i = grid.size() - 3; i < grid.size(); ++i) {
    const double x = static_cast<double>(grid[i]);
    const double y = std::log(eps[i]);
    finite = finite && std::isfinite(y);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
  const bool ok = monotone && finite && slope < 0.0;
  std::string detail = "eps =";
  for (double e : eps) detail += fmt(" %.4g", e);
  detail += fmt("  tail slope=%.4g", slope);
  line(4, "error monotonicity", ok, clock.lap(), detail);
}

void schur_horn_suite() {
  Stopwatch clock;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(2, 10);
  double unit = 0.0, diag_res = 0.0;
  bool chain_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = dim(rng);
    const auto [w, wp] = testkit::random_majorizing_pair(rng, d);
    const auto omega = DensityMatrix::from_spectrum(w, testkit::random_unitary(rng, d));
    const auto omega_p = DensityMatrix::from_spectrum(wp, testkit::random_unitary(rng, d));
    const auto plan = schur_horn_unitary(omega, omega_p);
    const auto sp = omega_p.spectrum();
    const Matrix moved = sp.vectors.adjoint() * plan.dense * omega.matrix() * plan.dense.adjoint() * sp.vectors;
    for (std::size_t i = 0; i < d; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      diag_res = std::max(diag_res, std::abs(moved(ii, ii).real() - sp.values[i]));
    }
    unit = std::max(unit, unitarity_residual(plan.dense));
    chain_ok = chain_ok && plan.steps.size() + 1 <= d;
  }
  const double t = clock.lap();
  const bool ok = unit <= 1e-9 && diag_res <= 1e-9 && chain_ok && t < 30.0;
  line(5, "schur-horn suite", ok, t,
       fmt("unitarity=%.3g diagonal=%.3g chain<=d-1:", unit, diag_res) + (chain_ok ? "yes" : "no"));
}

void dilation_suite() {
  Stopwatch clock;
  std::mt19937_64 rng(6);
  double reg = 0.0, prod = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    const std::size_t b = 2 + static_cast<std::size_t>((trial / 2) % 2);
    const auto dil = dilate_mixed_unitary(Channel::dephasing(testkit::random_unitary(rng, d)));
    const std::size_t m = dil.register_dimension();
    const auto joint = testkit::random_density(rng, d * b);
    // V acts on S and R; Sbar sits between them and is untouched.
    Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d * b * m), static_cast<Eigen::Index>(d * b * m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t s1 = 0; s1 < d; ++s1) {
        for (std::size_t s0 = 0; s0 < d; ++s0) {
          for (std::size_t k = 0; k < b; ++k) {
            v(static_cast<Eigen::Index>((s1 * b + k) * m + r), static_cast<Eigen::Index>((s0 * b + k) * m + r)) =
                dil.components[r](static_cast<Eigen::Index>(s1), static_cast<Eigen::Index>(s0));
          }
        }
      }
    }
    const Matrix out = v * kron(joint.matrix(), dil.sigma.matrix()) * v.adjoint();
    const SubsystemLayout layout({d, b, m}, {"S", "Sbar", "R"});
    const Matrix r_out = partial_trace_matrix(out, layout, {false, false, true});
    reg = std::max(reg, trace_distance(r_out, dil.sigma.matrix()));
    const Matrix sbar = partial_trace_matrix(joint.matrix(), SubsystemLayout({d, b}, {"S", "Sbar"}), {false, true});
    const Matrix rest = partial_trace_matrix(out, layout, {false, true, true});
    prod = std::max(prod, trace_distance(rest, kron(sbar, dil.sigma.matrix())));
  }
  const bool ok = reg <= 1e-10 && prod <= 1e-10;
  line(6, "dilation invariance suite", ok, clock.lap(), fmt("register=%.3g product=%.3g", reg, prod));
}

void work_suite() {
  Stopwatch clock;
  std::mt19937_64 rng(77);
  double gap = 0.0, worst_sample = 1e300;
  std::size_t violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> e(0.0, 2.0);
    const Matrix v = testkit::random_unitary(rng, 3);
    RealVector lam(3);
    for (Eigen::Index i = 0; i < 3; ++i) lam(i) = e(rng);
    const Hamiltonian h(Matrix(v * lam.cast<Complex>().asDiagonal() * v.adjoint()));
    const auto rho = testkit::random_density(rng, 3, 0.6);
    const auto w = catalytic_work(rho, h, 1000, 1000 + static_cast<std::uint64_t>(trial));
    gap = std::max(gap, std::abs(w.value - asymptotic_work(rho, h)));
    worst_sample = std::min(worst_sample, w.min_gap);
    violations += w.violations;
  }
  const bool ok = gap <= 1e-9 && violations == 0 && worst_sample >= -1e-7;
  line(7, "catalytic work", ok, clock.lap(),
       fmt("|W_cat - W_asym|=%.3g min sampled gap=%.3g violations=%.0f", gap, worst_sample, static_cast<double>(violations)));
}

void typicality_suite() {
  Stopwatch clock;
  const std::vector<double> p{0.9, 0.1};
  bool ok = true;
  std::string detail;
  for (std::size_t n : {10, 20, 40}) {
    const auto t = typical_truncate(p, n, 0.2);
    const auto b = projector_size_bounds(t);
    const double h = hoeffding_tail_bound(p, n, 0.2);
    const bool count_ok = b.count >= b.lower && b.count <= b.upper;
    const bool eig_ok = b.min_kept_probability >= b.eigenvalue_floor && b.max_kept_probability <= b.eigenvalue_ceiling;
    const bool tail_ok = t.tail_mass <= h;
    ok = ok && count_ok && eig_ok && tail_ok;
    if (!detail.empty()) detail += "  ";
    detail += fmt("n=%.0f count=%.0f tail=%.4g", static_cast<double>(n), b.count, t.tail_mass);
  }
  line(8, "typicality bounds", ok, clock.lap(), detail);
}

}  // namespace

int main() {
  three_level_example();
  run_grid();
  exact_catalysis();
  entropy_necessity();
  error_monotonicity();
  schur_horn_suite();
  dilation_suite();
  work_suite();
  typicality_suite();
  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
