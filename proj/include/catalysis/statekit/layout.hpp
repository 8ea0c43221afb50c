#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "catalysis/core.hpp"

namespace catalysis {

/// Tensor factorization of a state space, slowest factor first.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;

  SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
      : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.size() != labels_.size()) throw LayoutError("layout: dims and labels differ in length");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] == 0) throw LayoutError("layout: zero dimension for " + labels_[i]);
      for (std::size_t j = 0; j < i; ++j) {
        if (labels_[i] == labels_[j]) throw LayoutError("layout: duplicate label " + labels_[i]);
      }
    }
  }

  /// Single-factor layout.
  static SubsystemLayout single(std::size_t dim, std::string label) { return {{dim}, {std::move(label)}}; }

  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] std::size_t factors() const noexcept { return dims_.size(); }

  [[nodiscard]] std::size_t total_dimension() const noexcept {
    std::size_t t = 1;
    for (auto d : dims_) t = checked_mul(t, d);
    return t;
  }

  [[nodiscard]] std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw LayoutError("layout: unknown label " + label);
    return static_cast<std::size_t>(it - labels_.begin());
  }

  [[nodiscard]] bool contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  /// Mask of factors whose labels are in `keep`; throws on unknown labels.
  [[nodiscard]] std::vector<bool> mask(const std::vector<std::string>& keep) const {
    std::vector<bool> m(dims_.size(), false);
    for (const auto& l : keep) m[index_of(l)] = true;
    return m;
  }

  [[nodiscard]] SubsystemLayout restricted(const std::vector<bool>& keep) const {
    SubsystemLayout out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (keep[i]) {
        out.dims_.push_back(dims_[i]);
        out.labels_.push_back(labels_[i]);
      }
    }
    return out;
  }

  void check_dimension(std::size_t total, const std::string& what) const {
    if (total_dimension() != total) {
      throw LayoutError(what + ": layout dimension " + std::to_string(total_dimension()) +
                        " does not match state dimension " + std::to_string(total));
    }
  }

  friend SubsystemLayout concat(const SubsystemLayout& a, const SubsystemLayout& b) {
    auto dims = a.dims_;
    auto labels = a.labels_;
    dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
    labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
    return {std::move(dims), std::move(labels)};
  }

  friend bool operator==(const SubsystemLayout&, const SubsystemLayout&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
};

/// Row-major mixed-radix digits (first factor slowest).
inline std::vector<std::size_t> unravel(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    digits[f] = index % dims[f];
    index /= dims[f];
  }
  return digits;
}

inline std::size_t ravel(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
  std::size_t index = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) index = index * dims[f] + digits[f];
  return index;
}

namespace detail {

/// For every full index, its position within the kept and the traced factors.
struct SplitIndex {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

inline SplitIndex split_indices(const std::vector<std::size_t>& dims, const std::vector<bool>& keep) {
  SplitIndex s;
  for (std::size_t f = 0; f < dims.size(); ++f) (keep[f] ? s.kept_dim : s.traced_dim) *= dims[f];
  std::size_t total = s.kept_dim * s.traced_dim;
  s.kept.resize(total);
  s.traced.resize(total);
  std::vector<std::size_t> digits(dims.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t k = 0;
    std::size_t t = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      if (keep[f]) {
        k = k * dims[f] + digits[f];
      } else {
        t = t * dims[f] + digits[f];
      }
    }
    s.kept[i] = k;
    s.traced[i] = t;
    for (std::size_t f = dims.size(); f-- > 0;) {
      if (++digits[f] < dims[f]) break;
      digits[f] = 0;
    }
  }
  return s;
}

}  // namespace detail

}  // namespace catalysis
