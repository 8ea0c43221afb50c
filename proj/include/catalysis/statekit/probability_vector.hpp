#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "catalysis/core.hpp"

namespace catalysis {

/// Classical state on a finite sample space. Construction validates: entries
/// below -1e-12 are rejected, small negatives are clamped to zero, and the sum
/// must be 1 within 1e-10.
class ProbabilityVector {
 public:
  ProbabilityVector() : entries_{1.0} {}

  explicit ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) { validate(); }

  ProbabilityVector(std::initializer_list<double> entries) : entries_(entries) { validate(); }

  static ProbabilityVector uniform(std::size_t dimension) {
    if (dimension == 0) throw ValidationError("uniform: dimension must be positive");
    return ProbabilityVector(std::vector<double>(dimension, 1.0 / static_cast<double>(dimension)));
  }

  static ProbabilityVector point(std::size_t dimension, std::size_t index) {
    if (index >= dimension) throw ValidationError("point: index out of range");
    std::vector<double> e(dimension, 0.0);
    e[index] = 1.0;
    return ProbabilityVector(std::move(e));
  }

  /// Renormalizes a nonnegative vector; throws when the total mass is zero.
  static ProbabilityVector normalized(std::vector<double> entries) {
    double total = 0.0;
    for (double& x : entries) {
      if (x < 0.0) x = 0.0;
      total += x;
    }
    if (!(total > 0.0)) throw ValidationError("normalized: zero total mass");
    for (double& x : entries) x /= total;
    return ProbabilityVector(std::move(entries));
  }

  [[nodiscard]] std::size_t dimension() const noexcept { return entries_.size(); }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return entries_; }
  [[nodiscard]] double operator[](std::size_t i) const { return entries_[i]; }

  [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

 private:
  void validate() {
    if (entries_.empty()) throw ValidationError("probability vector: empty");
    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      double& x = entries_[i];
      if (!std::isfinite(x)) throw ValidationError("probability vector: non-finite entry at " + std::to_string(i));
      if (x < -tol::negative_probability) {
        throw ValidationError("probability vector: negative entry " + std::to_string(x) + " at " +
                              std::to_string(i));
      }
      if (x < 0.0) x = 0.0;
      total += x;
    }
    if (std::abs(total - 1.0) > tol::normalization) {
      throw ValidationError("probability vector: entries sum to " + std::to_string(total));
    }
  }

  std::vector<double> entries_;
};

/// Stable descending order of indices: ties keep their original order.
inline std::vector<std::size_t> descending_order(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

inline std::vector<double> sorted_descending(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace catalysis
