#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "catalysis/majorization/majorization.hpp"
#include "catalysis/majorization/permutation.hpp"
#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis {

struct PermutationTerm {
  double weight = 0.0;
  Permutation perm;
};

/// Convex combination sum_a q_a pi_a of permutations.
struct PermutationMixture {
  std::vector<PermutationTerm> terms;

  [[nodiscard]] std::size_t size() const noexcept { return terms.size(); }

  [[nodiscard]] std::size_t dimension() const noexcept { return terms.empty() ? 0 : terms.front().perm.size(); }

  [[nodiscard]] std::vector<double> apply(std::span<const double> w) const {
    std::vector<double> out(w.size(), 0.0);
    for (const auto& term : terms) {
      const auto moved = term.perm.apply(w);
      for (std::size_t i = 0; i < w.size(); ++i) out[i] += term.weight * moved[i];
    }
    return out;
  }

  /// Dense matrix M with (M w)_i = sum_a q_a (pi_a w)_i.
  [[nodiscard]] Eigen::MatrixXd matrix() const {
    const auto d = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (const auto& term : terms) {
      for (std::size_t i = 0; i < term.perm.size(); ++i) {
        m(static_cast<Eigen::Index>(term.perm(i)), static_cast<Eigen::Index>(i)) += term.weight;
      }
    }
    return m;
  }

  [[nodiscard]] double total_weight() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
  }
};

namespace detail {

inline constexpr double prune_weight = 1e-14;

/// Merges identical permutations, drops weights below 1e-14 and renormalizes.
inline PermutationMixture consolidate(std::vector<std::pair<double, std::vector<std::size_t>>> raw) {
  std::map<std::vector<std::size_t>, double> merged;
  std::vector<std::vector<std::size_t>> order;
  for (auto& [w, image] : raw) {
    auto [it, inserted] = merged.try_emplace(image, 0.0);
    if (inserted) order.push_back(image);
    it->second += w;
  }
  PermutationMixture out;
  double total = 0.0;
  for (const auto& image : order) {
    const double w = merged[image];
    if (w < prune_weight) continue;
    out.terms.push_back({w, Permutation(image)});
    total += w;
  }
  if (out.terms.empty()) throw MajorizationError("permutation mixture: all weights pruned");
  for (auto& t : out.terms) t.weight /= total;
  return out;
}

/// Node of a block decomposition. The walk vertices occupy consecutive pieces
/// [cum[i-1], cum[i]) of the node's unit interval; the remainder [cum.back(), 1)
/// is shared by all children through one common quantile.
struct BlockNode {
  std::vector<std::size_t> positions;  // global positions of the local coordinates
  std::size_t value_offset = 0;
  std::vector<double> cum;
  std::vector<std::vector<std::size_t>> vertices;  // vertices[i][p]: local value index at local position p
  std::vector<BlockNode> children;
};

inline std::vector<std::size_t> argsort_desc(const std::vector<double>& y) {
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  return idx;
}

/// Decomposes y (in the permutohedron of the descending values v) into
/// vertices by walking from y away from the aligned vertex until a new prefix
/// constraint becomes tight, then splitting at tight prefixes.
inline void permutohedron_block(BlockNode& node, std::vector<double> y, const std::vector<double>& v,
                                std::size_t& produced, std::size_t max_terms) {
  constexpr double tight_gap = 1e-13;
  const std::size_t c = v.size();
  auto emit = [&](double cum, std::vector<std::size_t> vertex) {
    node.cum.push_back(cum);
    node.vertices.push_back(std::move(vertex));
    if (++produced > max_terms) throw DimensionCapExceeded("permutation mixture: term count exceeds the allowed maximum");
  };
  if (c == 1) {
    emit(1.0, {0});
    return;
  }
  std::vector<double> prefix(c);
  std::partial_sum(v.begin(), v.end(), prefix.begin());
  const double shift = (prefix.back() - std::accumulate(y.begin(), y.end(), 0.0)) / static_cast<double>(c);
  for (double& x : y) x += shift;

  double used = 0.0;
  double rem = 1.0;
  for (std::size_t iter = 0; iter <= 4 * c + 8; ++iter) {
    const auto order = argsort_desc(y);
    std::vector<std::size_t> tight;
    double run = 0.0;
    for (std::size_t m = 0; m + 1 < c; ++m) {
      run += y[order[m]];
      if (prefix[m] - run <= tight_gap) tight.push_back(m);
    }
    if (!tight.empty()) {
      tight.push_back(c - 1);
      std::size_t start = 0;
      for (std::size_t m : tight) {
        BlockNode child;
        child.value_offset = node.value_offset + start;
        std::vector<double> sub_y;
        std::vector<double> sub_v(v.begin() + static_cast<std::ptrdiff_t>(start),
                                  v.begin() + static_cast<std::ptrdiff_t>(m + 1));
        for (std::size_t i = start; i <= m; ++i) {
          child.positions.push_back(node.positions[order[i]]);
          sub_y.push_back(y[order[i]]);
        }
        permutohedron_block(child, std::move(sub_y), sub_v, produced, max_terms);
        node.children.push_back(std::move(child));
        start = m + 1;
      }
      return;
    }
    std::vector<double> u(c);
    std::vector<std::size_t> assign(c);
    for (std::size_t i = 0; i < c; ++i) {
      u[order[i]] = v[i];
      assign[order[i]] = i;
    }
    std::vector<double> dir(c);
    double dmax = 0.0;
    bool any_positive = false;
    for (std::size_t i = 0; i < c; ++i) {
      dir[i] = y[i] - u[i];
      dmax = std::max(dmax, std::abs(dir[i]));
      any_positive = any_positive || dir[i] > 0.0;
    }
    if (dmax <= 1e-12 || !any_positive) {
      emit(1.0, std::move(assign));
      return;
    }
    double lam = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c; ++i) {
      if (dir[i] > 0.0) lam = std::min(lam, (v[0] - y[i]) / dir[i]);
    }
    // Dinkelbach iteration for the largest step keeping every prefix constraint.
    std::vector<double> z(c);
    for (int it = 0; it < 500; ++it) {
      for (std::size_t i = 0; i < c; ++i) z[i] = y[i] + lam * dir[i];
      const auto zo = argsort_desc(z);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_m = 0;
      double acc = 0.0;
      for (std::size_t m = 0; m + 1 < c; ++m) {
        acc += z[zo[m]];
        const double h = acc - prefix[m];
        if (h > best) {
          best = h;
          best_m = m;
        }
      }
      if (best <= 1e-15) break;
      double a = -prefix[best_m];
      double b = 0.0;
      for (std::size_t m = 0; m <= best_m; ++m) {
        a += y[zo[m]];
        b += dir[zo[m]];
      }
      if (!(b > 0.0)) break;
      lam = -a / b;
    }
    const double alpha = lam / (1.0 + lam);
    used += rem * alpha;
    emit(used, std::move(assign));
    rem *= 1.0 - alpha;
    for (std::size_t i = 0; i < c; ++i) y[i] += lam * dir[i];
  }
  throw MajorizationError("permutation mixture: face walk did not terminate");
}

inline double node_point(double lo, double hi, double frac) { return frac >= 1.0 ? hi : lo + (hi - lo) * frac; }

inline void collect_breaks(const BlockNode& node, double lo, double hi, std::vector<double>& out) {
  for (double c : node.cum) out.push_back(node_point(lo, hi, c));
  if (node.children.empty()) return;
  const double mid = node.cum.empty() ? lo : node_point(lo, hi, node.cum.back());
  for (const auto& child : node.children) collect_breaks(child, mid, hi, out);
}

/// Writes the vertex selected by the global quantile u into assign.
inline void evaluate_node(const BlockNode& node, double lo, double hi, double u, std::vector<std::size_t>& assign) {
  for (std::size_t i = 0; i < node.cum.size(); ++i) {
    if (u < node_point(lo, hi, node.cum[i]) || (i + 1 == node.cum.size() && node.children.empty())) {
      const auto& vertex = node.vertices[i];
      for (std::size_t p = 0; p < vertex.size(); ++p) assign[node.positions[p]] = node.value_offset + vertex[p];
      return;
    }
  }
  const double mid = node.cum.empty() ? lo : node_point(lo, hi, node.cum.back());
  for (const auto& child : node.children) evaluate_node(child, mid, hi, u, assign);
}

/// Flattens the tree: one term per interval between consecutive breakpoints.
inline std::vector<std::pair<double, std::vector<std::size_t>>> flatten(const BlockNode& root, std::size_t c) {
  std::vector<double> breaks;
  collect_breaks(root, 0.0, 1.0, breaks);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<std::pair<double, std::vector<std::size_t>>> out;
  double prev = 0.0;
  for (double b : breaks) {
    if (b <= prev) continue;
    std::vector<std::size_t> assign(c);
    evaluate_node(root, 0.0, 1.0, 0.5 * (prev + b), assign);
    out.emplace_back(b - prev, std::move(assign));
    prev = b;
  }
  return out;
}

}  // namespace detail

/// Mixture of permutations pi_a with sum_a q_a pi_a v = x, for x majorized by v.
/// Uses at most dim(x) terms; throws DimensionCapExceeded once the walk produces
/// more than `max_terms`.
inline PermutationMixture decompose_in_permutohedron(std::span<const double> x, std::span<const double> v,
                                                     std::size_t max_terms = static_cast<std::size_t>(-1)) {
  if (x.size() != v.size()) throw DimensionMismatch("permutation mixture: dimensions differ");
  if (!majorizes(v, x)) throw MajorizationError("permutation mixture: target is not majorized");
  const auto vorder = descending_order(v);
  std::vector<double> vs(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) vs[i] = v[vorder[i]];
  detail::BlockNode root;
  root.positions.resize(v.size());
  std::iota(root.positions.begin(), root.positions.end(), std::size_t{0});
  std::size_t produced = 0;
  detail::permutohedron_block(root, std::vector<double>(x.begin(), x.end()), vs, produced, max_terms);
  auto raw = detail::flatten(root, v.size());
  for (auto& [w, assign] : raw) {
    std::vector<std::size_t> image(v.size());
    for (std::size_t pos = 0; pos < v.size(); ++pos) image[vorder[assign[pos]]] = pos;
    assign = std::move(image);
  }
  return detail::consolidate(std::move(raw));
}

/// Mixture realizing the product of T-transforms on v: decomposes the chain's
/// image on the touched coordinates and acts as the identity elsewhere.
inline PermutationMixture mixture_from_chain(std::span<const double> v, const std::vector<TTransformStep>& steps,
                                             std::size_t max_terms = static_cast<std::size_t>(-1)) {
  const std::size_t d = v.size();
  const auto touched = touched_indices(d, steps);
  if (touched.empty()) return PermutationMixture{{PermutationTerm{1.0, Permutation::identity(d)}}};
  const auto x = apply_chain(std::vector<double>(v.begin(), v.end()), steps);
  std::vector<double> xs;
  std::vector<double> vs;
  for (auto i : touched) {
    xs.push_back(x[i]);
    vs.push_back(v[i]);
  }
  const auto local = decompose_in_permutohedron(xs, vs, max_terms);
  PermutationMixture out;
  for (const auto& term : local.terms) {
    auto image = Permutation::identity(d).image();
    for (std::size_t a = 0; a < touched.size(); ++a) image[touched[a]] = touched[term.perm(a)];
    out.terms.push_back({term.weight, Permutation(std::move(image))});
  }
  return out;
}

/// Term-by-term expansion of the chain: each step contributes the identity
/// with weight t and the transposition with weight 1-t. Exponential in the
/// chain length; `max_terms` guards the expansion.
inline PermutationMixture expand_chain_mixture(std::size_t d, const std::vector<TTransformStep>& steps,
                                               std::size_t max_terms = std::size_t{1} << 16) {
  std::map<std::vector<std::size_t>, double> current;
  current[Permutation::identity(d).image()] = 1.0;
  for (const auto& s : steps) {
    std::map<std::vector<std::size_t>, double> next;
    for (const auto& [image, w] : current) {
      if (s.t * w >= detail::prune_weight) next[image] += s.t * w;
      if ((1.0 - s.t) * w >= detail::prune_weight) {
        // Transposition applied after the current permutation.
        auto swapped = image;
        for (auto& x : swapped) {
          if (x == s.j) {
            x = s.k;
          } else if (x == s.k) {
            x = s.j;
          }
        }
        next[swapped] += (1.0 - s.t) * w;
      }
    }
    if (next.size() > max_terms) throw DimensionCapExceeded("expand_chain_mixture: term count exceeds guard");
    current = std::move(next);
  }
  std::vector<std::pair<double, std::vector<std::size_t>>> raw;
  for (auto& [image, w] : current) raw.emplace_back(w, image);
  return detail::consolidate(std::move(raw));
}

/// Mixture sum_a q_a pi_a with sum_a q_a pi_a w = w_prime, for w majorizing w_prime.
inline PermutationMixture permutation_mixture(const ProbabilityVector& w, const ProbabilityVector& wp) {
  if (w.dimension() != wp.dimension()) throw DimensionMismatch("permutation_mixture: dimensions differ");
  if (!majorizes(w, wp)) throw MajorizationError("permutation_mixture: first vector does not majorize the second");
  const std::size_t d = w.dimension();
  const auto ow = descending_order(w.entries());
  const auto owp = descending_order(wp.entries());
  std::vector<double> sw(d);
  std::vector<double> swp(d);
  for (std::size_t i = 0; i < d; ++i) {
    sw[i] = w[ow[i]];
    swp[i] = wp[owp[i]];
  }
  const auto steps = t_transform_chain(sw, swp);
  const auto sorted_mix = mixture_from_chain(sw, steps);
  PermutationMixture out;
  for (const auto& term : sorted_mix.terms) {
    // Sorted frame: entry at sorted position i moves to sorted position perm(i).
    std::vector<std::size_t> image(d);
    for (std::size_t i = 0; i < d; ++i) image[ow[i]] = owp[term.perm(i)];
    out.terms.push_back({term.weight, Permutation(std::move(image))});
  }
  return out;
}

}  // namespace catalysis
