#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catalysis/majorization/majorization.hpp"
#include "catalysis/majorization/schur_horn.hpp"
#include "catalysis/statekit/composite.hpp"
#include "catalysis/statekit/entropy.hpp"
#include "catalysis/typicality/typicality.hpp"

namespace catalysis {

struct TargetOptions {
  /// Select the smallest n whose certified error is at most epsilon.
  std::optional<double> epsilon;
  /// Use exactly this n (mutually exclusive with epsilon).
  std::optional<std::size_t> forced_n;
  /// Bound on d^n for the dense n-copy vectors.
  std::size_t cap = DimensionCaps{}.classical;
  std::size_t max_n = 64;
};

/// The n-copy target p'_{eps,n} = B p^{(x)n}, with B a product of T-transforms
/// taking the truncation of p^{(x)n} to the truncation of p'^{(x)n}.
///
/// Vectors are indexed by n-tuples of the given single-copy coordinates.
/// order[i] (order_prime[i]) is the tuple index sitting at sorted position i;
/// the chain acts in sorted positions.
struct MajorizedTarget {
  std::size_t n = 1;
  double delta = 0.0;
  double entropy_gap = 0.0;
  std::vector<double> p;
  std::vector<double> p_prime;
  std::vector<double> full;
  std::vector<double> full_prime;
  std::vector<std::size_t> order;
  std::vector<std::size_t> order_prime;
  std::vector<TTransformStep> steps;
  std::vector<double> target;
  double tail = 0.0;
  double tail_prime = 0.0;
  double eps_certified = 0.0;
  double eps_achieved = 0.0;
  bool fallback = false;

  [[nodiscard]] std::size_t dimension() const noexcept { return full.size(); }

  /// p^{(x)n} in sorted positions.
  [[nodiscard]] std::vector<double> sorted_source() const {
    std::vector<double> v(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) v[i] = full[order[i]];
    return v;
  }

  /// Target in sorted positions (chain image of sorted_source()).
  [[nodiscard]] std::vector<double> sorted_target() const {
    std::vector<double> v(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) v[i] = target[order_prime[i]];
    return v;
  }
};

namespace detail {

/// Indices sorted by (kept first, value descending, index ascending).
inline std::vector<std::size_t> truncation_order(const std::vector<double>& full, const std::vector<bool>& kept) {
  std::vector<std::size_t> idx(full.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (kept[a] != kept[b]) return static_cast<bool>(kept[a]);
    return full[a] > full[b];
  });
  return idx;
}

inline std::vector<double> sorted_truncation(const std::vector<double>& full, const std::vector<bool>& kept,
                                             const std::vector<std::size_t>& order) {
  double mass = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (kept[i]) mass += full[i];
  }
  std::vector<double> out(full.size(), 0.0);
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (kept[order[i]]) out[i] = full[order[i]] / mass;
  }
  return out;
}

struct TruncatedPair {
  TypicalTruncation t;
  TypicalTruncation tp;
  std::vector<double> full;
  std::vector<double> full_prime;
  std::vector<std::size_t> order;
  std::vector<std::size_t> order_prime;
  std::vector<double> w;
  std::vector<double> wp;
};

/// Truncations of both states at (n, delta) in sorted positions; empty when
/// either truncation is degenerate.
inline std::optional<TruncatedPair> truncate_pair(std::span<const double> p, std::span<const double> pp,
                                                  std::size_t n, double delta, std::size_t cap) {
  TruncatedPair out;
  try {
    out.t = typical_truncate(p, n, delta, cap);
    out.tp = typical_truncate(pp, n, delta, cap);
  } catch (const DegenerateTruncation&) {
    return std::nullopt;
  }
  std::vector<bool> kept;
  std::vector<bool> kept_prime;
  out.t.materialize(out.full, kept, cap);
  out.tp.materialize(out.full_prime, kept_prime, cap);
  out.order = truncation_order(out.full, kept);
  out.order_prime = truncation_order(out.full_prime, kept_prime);
  out.w = sorted_truncation(out.full, kept, out.order);
  out.wp = sorted_truncation(out.full_prime, kept_prime, out.order_prime);
  return out;
}

/// Largest n with d^n * n * factor within the cap (0 if none).
inline std::size_t largest_joint_n(std::size_t d, std::size_t cap, std::size_t max_n, std::size_t factor) {
  std::size_t best = 0;
  std::size_t dn = 1;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (dn > cap / d) break;
    dn *= d;
    if (dn > cap / (n * factor)) break;
    best = n;
  }
  return best;
}

inline void finish_target(MajorizedTarget& m) {
  auto x = apply_chain(m.sorted_source(), m.steps);
  m.target.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) m.target[m.order_prime[i]] = x[i];
  m.eps_achieved = trace_distance(m.target, m.full_prime);
}

}  // namespace detail

/// Builds p'_{eps,n}. delta = dH/4. In epsilon mode n is the smallest value
/// with non-degenerate, majorizing truncations and tail(p) + tail(p') <= eps;
/// in forced-n mode an unusable truncation falls back to the sorted relabeling
/// of p^{(x)n} onto the eigenbasis order of p'^{(x)n}.
inline MajorizedTarget build_majorized_target(std::span<const double> p, std::span<const double> pp,
                                              const TargetOptions& options) {
  if (p.size() != pp.size()) throw DimensionMismatch("build_majorized_target: dimensions differ");
  if (options.epsilon && options.forced_n) throw ValidationError("build_majorized_target: epsilon and n are exclusive");
  if (!options.epsilon && !options.forced_n) throw ValidationError("build_majorized_target: need epsilon or n");
  const double gap = shannon_entropy(pp) - shannon_entropy(p);
  if (!(gap > 0.0)) throw EntropyGapError("build_majorized_target: target entropy must exceed source entropy");
  const double delta = gap / 4.0;
  const std::size_t d = p.size();

  MajorizedTarget m;
  m.delta = delta;
  m.entropy_gap = gap;
  m.p.assign(p.begin(), p.end());
  m.p_prime.assign(pp.begin(), pp.end());

  if (options.forced_n) {
    const std::size_t n = *options.forced_n;
    if (n == 0) throw ValidationError("build_majorized_target: n must be at least 1");
    check_cap(checked_pow(d, n), options.cap, "build_majorized_target");
    m.n = n;
    auto pair = detail::truncate_pair(p, pp, n, delta, options.cap);
    if (pair && majorizes(pair->w, pair->wp)) {
      m.full = std::move(pair->full);
      m.full_prime = std::move(pair->full_prime);
      m.order = std::move(pair->order);
      m.order_prime = std::move(pair->order_prime);
      m.steps = t_transform_chain(pair->w, pair->wp);
      m.tail = pair->t.tail_mass;
      m.tail_prime = pair->tp.tail_mass;
      detail::finish_target(m);
      m.eps_certified = std::min(1.0, m.tail + m.tail_prime);
      return m;
    }
    m.fallback = true;
    m.full = power_entries(p, n, options.cap);
    m.full_prime = power_entries(pp, n, options.cap);
    m.order = descending_order(m.full);
    m.order_prime = descending_order(m.full_prime);
    detail::finish_target(m);
    m.eps_certified = m.eps_achieved;
    return m;
  }

  const double eps = *options.epsilon;
  if (!(eps > 0.0)) throw ValidationError("build_majorized_target: epsilon must be positive");
  double best = 1.0;
  for (std::size_t n = 1; n <= options.max_n && checked_pow(d, n) <= options.cap; ++n) {
    auto pair = detail::truncate_pair(p, pp, n, delta, options.cap);
    if (!pair || !majorizes(pair->w, pair->wp)) continue;
    const double certified = pair->t.tail_mass + pair->tp.tail_mass;
    best = std::min(best, certified);
    if (certified > eps) continue;
    m.n = n;
    m.full = std::move(pair->full);
    m.full_prime = std::move(pair->full_prime);
    m.order = std::move(pair->order);
    m.order_prime = std::move(pair->order_prime);
    m.steps = t_transform_chain(pair->w, pair->wp);
    m.tail = pair->t.tail_mass;
    m.tail_prime = pair->tp.tail_mass;
    m.eps_certified = certified;
    detail::finish_target(m);
    return m;
  }
  throw DimensionCapExceeded("build_majorized_target: no admissible n reaches epsilon " + std::to_string(eps) +
                             " within the dimension cap; smallest certified epsilon " + std::to_string(best));
}

inline MajorizedTarget build_majorized_target(const ProbabilityVector& p, const ProbabilityVector& pp,
                                              const TargetOptions& options) {
  return build_majorized_target(p.entries(), pp.entries(), options);
}

/// Dense unitary Q' P'^T R P Q^dagger on the n-copy space, where Q = V^{(x)n},
/// Q' = V'^{(x)n}, P sorts tuple indices and R is the rotation product.
inline UnitaryPlan majorization_unitary(const MajorizedTarget& m, const Matrix& basis, const Matrix& basis_prime,
                                        std::size_t cap = DimensionCaps{}.quantum) {
  const std::size_t dim = m.dimension();
  check_cap(dim, cap, "majorization_unitary");
  const auto nd = static_cast<Eigen::Index>(dim);
  const Matrix q = power_matrix(basis, m.n, cap);
  const Matrix qp = power_matrix(basis_prime, m.n, cap);
  Matrix p = Matrix::Zero(nd, nd);
  Matrix pp = Matrix::Zero(nd, nd);
  for (std::size_t i = 0; i < dim; ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m.order[i])) = 1.0;
    pp(static_cast<Eigen::Index>(m.order_prime[i]), static_cast<Eigen::Index>(i)) = 1.0;
  }
  UnitaryPlan plan;
  plan.dimension = dim;
  plan.steps = m.steps;
  plan.pre_rotation = p * q.adjoint();
  plan.post_rotation = qp * pp;
  plan.dense = plan.realize();
  return plan;
}

}  // namespace catalysis
