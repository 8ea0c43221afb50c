#pragma once

#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "catalysis/core.hpp"

namespace catalysis {

/// Bijection on {0..d-1} acting on vectors as out[image[i]] = in[i].
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    if (!is_bijection(image_)) throw ValidationError("permutation: index map is not a bijection");
  }

  static Permutation identity(std::size_t d) {
    std::vector<std::size_t> id(d);
    std::iota(id.begin(), id.end(), std::size_t{0});
    return Permutation(std::move(id));
  }

  static Permutation transposition(std::size_t d, std::size_t a, std::size_t b) {
    auto p = identity(d);
    std::swap(p.image_[a], p.image_[b]);
    return p;
  }

  /// Permutation moving entry source[i] to position i, i.e. out[i] = in[source[i]].
  static Permutation gather(const std::vector<std::size_t>& source) {
    std::vector<std::size_t> image(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) image.at(source[i]) = i;
    return Permutation(std::move(image));
  }

  static bool is_bijection(const std::vector<std::size_t>& image) {
    std::vector<bool> seen(image.size(), false);
    for (auto x : image) {
      if (x >= image.size() || seen[x]) return false;
      seen[x] = true;
    }
    return true;
  }

  [[nodiscard]] std::size_t size() const noexcept { return image_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& image() const noexcept { return image_; }
  [[nodiscard]] std::size_t operator()(std::size_t i) const { return image_[i]; }

  [[nodiscard]] bool is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) return false;
    }
    return true;
  }

  template <class T>
  [[nodiscard]] std::vector<T> apply(std::span<const T> in) const {
    if (in.size() != image_.size()) throw DimensionMismatch("permutation: vector dimension");
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[image_[i]] = in[i];
    return out;
  }

  [[nodiscard]] std::vector<double> apply(const std::vector<double>& in) const {
    return apply(std::span<const double>(in));
  }

  [[nodiscard]] Permutation inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    return Permutation(std::move(inv));
  }

  /// (a * b) applies b first, then a.
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw DimensionMismatch("permutation: composition sizes differ");
    std::vector<std::size_t> image(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) image[i] = a.image_[b.image_[i]];
    return Permutation(std::move(image));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> image_;
};

}  // namespace catalysis
