#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis {

/// w is mapped to t*w + (1-t)*swap(w) on the pair (j, k).
struct TTransformStep {
  std::size_t j = 0;
  std::size_t k = 1;
  double t = 1.0;

  friend bool operator==(const TTransformStep&, const TTransformStep&) = default;
};

/// Descending partial sums of a dominate those of b (shorter vector padded with zeros).
inline bool majorizes(std::span<const double> a, std::span<const double> b, double slack = tol::majorization_slack) {
  auto sa = sorted_descending(a);
  auto sb = sorted_descending(b);
  const std::size_t d = std::max(sa.size(), sb.size());
  sa.resize(d, 0.0);
  sb.resize(d, 0.0);
  double pa = 0.0;
  double pb = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    pa += sa[i];
    pb += sb[i];
    if (pa < pb - slack) return false;
  }
  return true;
}

inline bool majorizes(const ProbabilityVector& a, const ProbabilityVector& b) {
  return majorizes(a.entries(), b.entries());
}

inline void apply_step(std::vector<double>& w, const TTransformStep& s) {
  const double a = w[s.j];
  const double b = w[s.k];
  w[s.j] = s.t * a + (1.0 - s.t) * b;
  w[s.k] = s.t * b + (1.0 - s.t) * a;
}

inline std::vector<double> apply_chain(std::vector<double> w, const std::vector<TTransformStep>& steps) {
  for (const auto& s : steps) {
    if (s.j >= w.size() || s.k >= w.size()) throw DimensionMismatch("apply_chain: step index out of range");
    apply_step(w, s);
  }
  return w;
}

/// Dense d x d doubly stochastic matrix of one step.
inline Eigen::MatrixXd step_matrix(std::size_t d, const TTransformStep& s) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const auto j = static_cast<Eigen::Index>(s.j);
  const auto k = static_cast<Eigen::Index>(s.k);
  m(j, j) = s.t;
  m(k, k) = s.t;
  m(j, k) = 1.0 - s.t;
  m(k, j) = 1.0 - s.t;
  return m;
}

/// Sorted list of indices touched by any step.
inline std::vector<std::size_t> touched_indices(std::size_t d, const std::vector<TTransformStep>& steps) {
  std::vector<bool> hit(d, false);
  for (const auto& s : steps) hit[s.j] = hit[s.k] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d; ++i) {
    if (hit[i]) out.push_back(i);
  }
  return out;
}

/// T-transform chain taking descending-sorted w to descending-sorted w_prime.
/// Each step picks the smallest deficient index k (w'_k > w_k) and the largest
/// surplus index j < k (w_j > w'_j); entries within 1e-12 count as equal and
/// are snapped to the target after each step. At most d-1 steps.
inline std::vector<TTransformStep> t_transform_chain(std::span<const double> w_in, std::span<const double> wp) {
  if (w_in.size() != wp.size()) throw MajorizationError("t_transform_chain: dimensions differ");
  const std::size_t d = w_in.size();
  constexpr double eq = tol::equal_entries;
  for (std::size_t i = 1; i < d; ++i) {
    if (w_in[i] > w_in[i - 1] + eq || wp[i] > wp[i - 1] + eq) {
      throw MajorizationError("t_transform_chain: inputs must be sorted descending");
    }
  }
  if (!majorizes(w_in, wp)) throw MajorizationError("t_transform_chain: first vector does not majorize the second");

  std::vector<double> w(w_in.begin(), w_in.end());
  std::vector<TTransformStep> steps;
  std::vector<std::size_t> surplus;
  std::size_t scan = 0;
  std::size_t k = 0;
  auto next_deficient = [&]() {
    while (scan < d && !(wp[scan] > w[scan] + eq)) {
      if (w[scan] > wp[scan] + eq) surplus.push_back(scan);
      ++scan;
    }
    return scan;
  };
  k = next_deficient();
  while (k < d) {
    if (surplus.empty()) {
      double dev = 0.0;
      for (std::size_t i = 0; i < d; ++i) dev = std::max(dev, std::abs(w[i] - wp[i]));
      if (dev <= tol::majorization_slack) break;
      throw MajorizationError("t_transform_chain: no surplus index before deficient index " + std::to_string(k));
    }
    if (steps.size() >= d) throw MajorizationError("t_transform_chain: no convergence within d-1 steps");
    const std::size_t j = surplus.back();
    if (!(w[j] > w[k])) throw MajorizationError("t_transform_chain: degenerate pair");
    const double delta = std::min(w[j] - wp[j], wp[k] - w[k]);
    const double t = std::clamp(1.0 - delta / (w[j] - w[k]), 0.0, 1.0);
    TTransformStep s{j, k, t};
    apply_step(w, s);
    steps.push_back(s);
    if (std::abs(w[j] - wp[j]) <= eq) {
      w[j] = wp[j];
      surplus.pop_back();
    }
    if (std::abs(w[k] - wp[k]) <= eq) {
      w[k] = wp[k];
      ++scan;
      k = next_deficient();
    }
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < d; ++i) dev = std::max(dev, std::abs(w[i] - wp[i]));
  if (dev > tol::majorization_slack) {
    throw MajorizationError("t_transform_chain: final deviation " + std::to_string(dev) + " exceeds 1e-10");
  }
  return steps;
}

inline std::vector<TTransformStep> t_transform_chain(const ProbabilityVector& w, const ProbabilityVector& wp) {
  return t_transform_chain(w.entries(), wp.entries());
}

}  // namespace catalysis
