#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catalysis/majorization/permutation.hpp"
#include "catalysis/majorization/permutation_mixture.hpp"
#include "catalysis/report.hpp"
#include "catalysis/statekit/composite.hpp"
#include "catalysis/statekit/entropy.hpp"
#include "catalysis/typicality/majorized_target.hpp"

namespace catalysis {

struct ClassicalOptions {
  std::optional<double> epsilon;
  std::optional<std::size_t> forced_n;
  /// Mixing weight with the uniform distribution for equal-entropy targets in forced-n mode.
  double eta = 1e-3;
  /// Bound on the joint dimension d^n * n * R.
  std::size_t cap = DimensionCaps{}.classical;
  std::size_t max_n = 64;
};

/// Catalyst q on S2..Sn x A x R, built in the descending-sorted frames of p and p'.
///
/// Conditioned on A = k (0-based a = k-1) and R = alpha, the S2..Sn part is
/// k-1 fresh copies of p followed by the first n-k sites of x^(alpha) = pi^(alpha) p^(x)n.
struct ClassicalCatalyst {
  std::vector<double> p;
  std::vector<double> p_prime;
  /// Target actually constructed (p' mixed with uniform for equal-entropy inputs).
  std::vector<double> p_target;
  std::size_t d = 1;
  std::size_t n = 1;
  std::vector<double> q;
  SubsystemLayout layout;
  /// Mixture over n-tuples: pi^(alpha) maps p^(x)n tuples (p frame) to p' frame tuples.
  PermutationMixture mixture;
  /// frame[i] is the original index of the i-th largest entry of p (frame_prime for p').
  std::vector<std::size_t> frame;
  std::vector<std::size_t> frame_prime;
  std::optional<MajorizedTarget> target;
  double eps_certified = 0.0;
  double eps_ncopy = 0.0;
  double eta = 0.0;
  bool bypass = false;
  bool fallback = false;
  bool perturbed = false;

  [[nodiscard]] std::size_t r_dim() const { return mixture.size(); }
};

/// Global permutation on S1..Sn x A x R (S1 slowest, R fastest), kept as its
/// factors: relabel S1 into the sorted frame of p, the controlled permutation,
/// the cyclic shift of S, the shift of A, and the relabel of S1 out of the
/// sorted frame of p'.
struct GlobalPermutation {
  SubsystemLayout layout;
  Permutation relabel_in;
  Permutation step1;
  Permutation step2;
  Permutation step3;
  Permutation relabel_out;

  [[nodiscard]] Permutation composed() const { return relabel_out * step3 * step2 * step1 * relabel_in; }
};

namespace detail {

inline bool is_relabeling(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  const auto sa = sorted_descending(a);
  const auto sb = sorted_descending(b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (std::abs(sa[i] - sb[i]) > tol::equal_entries) return false;
  }
  return true;
}

/// Marginal of a tuple distribution on its first m of n sites.
inline std::vector<double> leading_marginal(const std::vector<double>& x, std::size_t d, std::size_t n, std::size_t m) {
  const std::size_t lead = checked_pow(d, m);
  const std::size_t trail = checked_pow(d, n - m);
  std::vector<double> out(lead, 0.0);
  for (std::size_t i = 0; i < lead; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < trail; ++j) s += x[i * trail + j];
    out[i] = s;
  }
  return out;
}

/// Permutation on S1 x rest acting as `local` on S1.
inline Permutation lift_first_factor(const Permutation& local, std::size_t rest) {
  std::vector<std::size_t> image(local.size() * rest);
  for (std::size_t s = 0; s < local.size(); ++s) {
    for (std::size_t r = 0; r < rest; ++r) image[s * rest + r] = local(s) * rest + r;
  }
  return Permutation(std::move(image));
}

}  // namespace detail

/// Catalyst and global permutation such that one application to p (x) q leaves
/// the catalyst marginal exactly q and the S1 marginal within eps_certified of p'.
inline std::pair<ClassicalCatalyst, GlobalPermutation> build_classical_catalyst(const ProbabilityVector& p_in,
                                                                               const ProbabilityVector& pp_in,
                                                                               const ClassicalOptions& options) {
  if (p_in.dimension() != pp_in.dimension()) throw DimensionMismatch("build_classical_catalyst: dimensions differ");
  if (options.epsilon && options.forced_n) throw ValidationError("build_classical_catalyst: epsilon and n are exclusive");
  if (!options.epsilon && !options.forced_n) throw ValidationError("build_classical_catalyst: need epsilon or n");
  if (options.epsilon && !(*options.epsilon > 0.0)) throw ValidationError("build_classical_catalyst: epsilon must be positive");

  ClassicalCatalyst cat;
  cat.d = p_in.dimension();
  cat.p = p_in.values();
  cat.p_prime = pp_in.values();
  cat.p_target = cat.p_prime;
  cat.frame = descending_order(cat.p);
  const std::size_t d = cat.d;

  const double h = shannon_entropy(cat.p);
  const double hp = shannon_entropy(cat.p_prime);
  if (hp < h - tol::equal_entries) {
    throw EntropyGapError("build_classical_catalyst: H(p') < H(p), no catalytic transition exists");
  }

  GlobalPermutation perm;
  if (detail::is_relabeling(cat.p, cat.p_prime)) {
    cat.bypass = true;
    cat.frame_prime = descending_order(cat.p_prime);
    cat.n = 1;
    cat.q = {1.0};
    cat.layout = SubsystemLayout({1, 1}, {"A", "R"});
    cat.mixture.terms.push_back({1.0, Permutation::identity(d)});
    cat.eps_certified = 0.0;
    perm.layout = SubsystemLayout({d, 1, 1}, {"S1", "A", "R"});
    std::vector<std::size_t> out(d);
    std::vector<std::size_t> in(d);
    for (std::size_t i = 0; i < d; ++i) {
      in[cat.frame[i]] = i;
      out[i] = cat.frame_prime[i];
    }
    perm.relabel_in = Permutation(std::move(in));
    perm.relabel_out = Permutation(std::move(out));
    perm.step1 = perm.step2 = perm.step3 = Permutation::identity(d);
    return {std::move(cat), std::move(perm)};
  }

  double run_eps = options.epsilon.value_or(0.0);
  double extra = 0.0;
  if (hp <= h + tol::equal_entries) {
    cat.perturbed = true;
    cat.eta = options.epsilon ? *options.epsilon / 2.0 : options.eta;
    for (auto& x : cat.p_target) x = (1.0 - cat.eta) * x + cat.eta / static_cast<double>(d);
    extra = trace_distance(cat.p_target, cat.p_prime);
    if (options.epsilon) run_eps = *options.epsilon / 2.0;
  }
  cat.frame_prime = descending_order(cat.p_target);

  std::vector<double> ps(d);
  std::vector<double> pps(d);
  for (std::size_t i = 0; i < d; ++i) {
    ps[i] = cat.p[cat.frame[i]];
    pps[i] = cat.p_target[cat.frame_prime[i]];
  }

  const std::size_t n_max = detail::largest_joint_n(d, options.cap, options.max_n, 1);
  if (n_max == 0) throw DimensionCapExceeded("build_classical_catalyst: d exceeds the cap");
  TargetOptions topts;
  topts.cap = options.cap;
  topts.max_n = n_max;
  if (options.forced_n) {
    if (*options.forced_n > n_max) {
      throw DimensionCapExceeded("build_classical_catalyst: joint dimension d^n * n exceeds cap " +
                                 std::to_string(options.cap) + " for n=" + std::to_string(*options.forced_n));
    }
    topts.forced_n = options.forced_n;
  } else {
    topts.epsilon = run_eps;
  }
  MajorizedTarget target = build_majorized_target(ps, pps, topts);
  const std::size_t n = target.n;
  cat.n = n;
  cat.fallback = target.fallback;
  cat.eps_ncopy = target.eps_achieved;
  cat.eps_certified = std::min(1.0, std::min(target.eps_certified, target.eps_achieved) + extra);

  // Mixture in sorted positions, then mapped to tuple indices.
  const std::size_t dn = target.dimension();
  const std::size_t max_r = options.cap / std::max<std::size_t>(1, checked_mul(dn, n));
  if (max_r == 0) throw DimensionCapExceeded("build_classical_catalyst: d^n * n exceeds the cap");
  const auto sorted_mix = [&] {
    try {
      return mixture_from_chain(target.sorted_source(), target.steps, max_r);
    } catch (const DimensionCapExceeded&) {
      throw DimensionCapExceeded("build_classical_catalyst: mixture needs more than " + std::to_string(max_r) +
                                 " terms; joint dimension d^n * n * R would exceed cap " + std::to_string(options.cap));
    }
  }();
  const std::size_t rdim = sorted_mix.size();
  const std::size_t joint = checked_mul(checked_mul(dn, n), rdim);
  check_cap(joint, options.cap, "build_classical_catalyst: joint dimension d^n * n * R");
  std::vector<std::size_t> inv_order(dn);
  for (std::size_t i = 0; i < dn; ++i) inv_order[target.order[i]] = i;
  for (const auto& term : sorted_mix.terms) {
    std::vector<std::size_t> image(dn);
    for (std::size_t t = 0; t < dn; ++t) image[t] = target.order_prime[term.perm(inv_order[t])];
    cat.mixture.terms.push_back({term.weight, Permutation(std::move(image))});
  }

  // Catalyst q over S2..Sn, A, R.
  std::vector<std::size_t> cat_dims(n > 1 ? n - 1 : 0, d);
  std::vector<std::string> cat_labels;
  for (std::size_t i = 2; i <= n; ++i) cat_labels.push_back("S" + std::to_string(i));
  cat_dims.push_back(n);
  cat_labels.push_back("A");
  cat_dims.push_back(rdim);
  cat_labels.push_back("R");
  cat.layout = SubsystemLayout(cat_dims, cat_labels);
  const std::size_t rest = checked_pow(d, n - 1);
  cat.q.assign(rest * n * rdim, 0.0);
  for (std::size_t r = 0; r < rdim; ++r) {
    const auto x = cat.mixture.terms[r].perm.apply(target.full);
    const double qa = cat.mixture.terms[r].weight;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto fresh = power_entries(ps, k - 1, options.cap);
      const auto corr = detail::leading_marginal(x, d, n, n - k);
      const double weight = qa / static_cast<double>(n);
      for (std::size_t a = 0; a < fresh.size(); ++a) {
        for (std::size_t b = 0; b < corr.size(); ++b) {
          const std::size_t s = a * corr.size() + b;
          cat.q[(s * n + (k - 1)) * rdim + r] = weight * fresh[a] * corr[b];
        }
      }
    }
  }
  cat.target = std::move(target);

  // Global permutation.
  std::vector<std::size_t> dims(n, d);
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back("S" + std::to_string(i));
  dims.push_back(n);
  labels.push_back("A");
  dims.push_back(rdim);
  labels.push_back("R");
  perm.layout = SubsystemLayout(dims, labels);
  const std::size_t ar = n * rdim;
  std::vector<std::size_t> s1(joint);
  std::vector<std::size_t> s2(joint);
  std::vector<std::size_t> s3(joint);
  for (std::size_t t = 0; t < dn; ++t) {
    const std::size_t shifted = (t % d) * rest + t / d;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t r = 0; r < rdim; ++r) {
        const std::size_t idx = (t * n + a) * rdim + r;
        const std::size_t tt = (a == n - 1) ? cat.mixture.terms[r].perm(t) : t;
        s1[idx] = (tt * n + a) * rdim + r;
        s2[idx] = shifted * ar + a * rdim + r;
        s3[idx] = (t * n + (a + 1) % n) * rdim + r;
      }
    }
  }
  perm.step1 = Permutation(std::move(s1));
  perm.step2 = Permutation(std::move(s2));
  perm.step3 = Permutation(std::move(s3));
  std::vector<std::size_t> in(d);
  std::vector<std::size_t> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    in[cat.frame[i]] = i;
    out[i] = cat.frame_prime[i];
  }
  perm.relabel_in = detail::lift_first_factor(Permutation(std::move(in)), joint / d);
  perm.relabel_out = detail::lift_first_factor(Permutation(std::move(out)), joint / d);
  return {std::move(cat), std::move(perm)};
}

inline std::pair<ClassicalCatalyst, GlobalPermutation> build_classical_catalyst(const ProbabilityVector& p,
                                                                               const ProbabilityVector& pp,
                                                                               double epsilon) {
  ClassicalOptions o;
  o.epsilon = epsilon;
  return build_classical_catalyst(p, pp, o);
}

/// (1/n) sum_k of the single-site marginals of the n-copy target, in the original frame of p'.
inline std::vector<double> analytic_output(const ClassicalCatalyst& cat) {
  std::vector<double> out(cat.d, 0.0);
  if (cat.bypass || !cat.target) {
    for (std::size_t i = 0; i < cat.d; ++i) out[cat.frame_prime[i]] = cat.p[cat.frame[i]];
    return out;
  }
  const auto& t = cat.target->target;
  const std::size_t n = cat.n;
  const std::size_t d = cat.d;
  std::vector<double> sorted(d, 0.0);
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    std::size_t rem = idx;
    for (std::size_t site = 0; site < n; ++site) {
      sorted[rem % d] += t[idx];
      rem /= d;
    }
  }
  for (std::size_t i = 0; i < d; ++i) out[cat.frame_prime[i]] = sorted[i] / static_cast<double>(n);
  return out;
}

/// Checks the classical catalytic definition on given joint states. The first
/// factor of `layout` is the system; the rest is the catalyst.
inline TransitionReport verify_catalytic(std::span<const double> joint_in, std::span<const double> joint_out,
                                         const SubsystemLayout& layout, std::span<const double> target,
                                         double eps_claim) {
  TransitionReport rep;
  layout.check_dimension(joint_in.size(), "verify_catalytic");
  layout.check_dimension(joint_out.size(), "verify_catalytic");
  std::vector<bool> sys(layout.factors(), false);
  sys[0] = true;
  std::vector<bool> rest(layout.factors(), true);
  rest[0] = false;
  const auto cat_in = marginal(joint_in, layout, rest);
  const auto cat_out = marginal(joint_out, layout, rest);
  for (std::size_t i = 0; i < cat_in.size(); ++i) {
    rep.catalyst_residual = std::max(rep.catalyst_residual, std::abs(cat_in[i] - cat_out[i]));
  }
  const auto sys_in = marginal(joint_in, layout, sys);
  rep.output = marginal(joint_out, layout, sys);
  if (rep.output.size() != target.size()) throw DimensionMismatch("verify_catalytic: target dimension");
  rep.output_distance = trace_distance(rep.output, target);
  rep.entropy_in = shannon_entropy(sys_in);
  rep.entropy_out = shannon_entropy(rep.output);
  rep.mutual_information = rep.entropy_out + shannon_entropy(cat_out) - shannon_entropy(joint_out);
  const auto a = sorted_descending(joint_in);
  const auto b = sorted_descending(joint_out);
  for (std::size_t i = 0; i < a.size(); ++i) rep.spectrum_residual = std::max(rep.spectrum_residual, std::abs(a[i] - b[i]));
  rep.eps_claim = eps_claim;
  rep.dims.system = layout.dims()[0];
  rep.dims.catalyst_total = cat_in.size();
  rep.pass = rep.catalyst_residual <= tol::catalyst_residual &&
             rep.output_distance <= eps_claim + tol::distance_slack && rep.spectrum_residual <= tol::equal_entries;
  return rep;
}

/// Runs the protocol on p (x) q and reports against the original target p'.
inline std::pair<std::vector<double>, TransitionReport> apply_protocol(const ProbabilityVector& p,
                                                                       const ClassicalCatalyst& cat,
                                                                       const GlobalPermutation& perm) {
  if (p.dimension() != cat.d) throw LayoutError("apply_protocol: system dimension does not match the catalyst");
  perm.layout.check_dimension(cat.d * cat.q.size(), "apply_protocol");
  const auto joint_in = kron(p.entries(), cat.q);
  const auto joint_out = perm.composed().apply(joint_in);
  auto rep = verify_catalytic(joint_in, joint_out, perm.layout, cat.p_prime, 0.0);
  rep.eps_certified = cat.eps_certified;
  rep.eps_ncopy = cat.eps_ncopy;
  rep.fallback = cat.fallback;
  rep.bypass = cat.bypass;
  rep.dims.n = cat.n;
  rep.dims.a = perm.layout.dims()[perm.layout.index_of("A")];
  rep.dims.r = perm.layout.dims()[perm.layout.index_of("R")];
  rep.dims.catalyst_total = cat.q.size();
  rep.pass = rep.catalyst_residual <= tol::catalyst_residual &&
             rep.output_distance <= std::max(rep.eps_certified, rep.eps_claim) + tol::distance_slack &&
             rep.spectrum_residual <= tol::equal_entries;
  return {joint_out, rep};
}

}  // namespace catalysis
