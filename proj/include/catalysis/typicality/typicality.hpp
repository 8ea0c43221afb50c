#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catalysis/majorization/majorization.hpp"
#include "catalysis/statekit/composite.hpp"
#include "catalysis/statekit/entropy.hpp"

namespace catalysis {

/// All n-tuples with the same symbol counts share probability and surprisal.
struct TypeClass {
  std::vector<std::size_t> counts;
  double multiplicity = 0.0;  // multinomial coefficient
  double log_probability = 0.0;  // ln of the probability of one tuple; -inf if a zero symbol occurs
  double surprisal = 0.0;  // (1/n) sum of ln(1/p) over the tuple
  bool kept = false;

  [[nodiscard]] double probability() const { return std::exp(log_probability); }
  [[nodiscard]] double mass() const { return std::exp(std::log(multiplicity) + log_probability); }
};

/// Typical truncation of p^{(x)n}: tuples with |surprisal - H| < delta are kept,
/// everything else is removed and the kept part renormalized.
struct TypicalTruncation {
  std::vector<double> base;
  std::size_t n = 1;
  double delta = 0.0;
  double entropy = 0.0;
  std::vector<TypeClass> classes;
  double tail_mass = 0.0;
  double kept_count = 0.0;

  [[nodiscard]] std::size_t dimension() const { return checked_pow(base.size(), n); }

  /// Dense entries of p^{(x)n} and the kept flags, tuple index row-major.
  void materialize(std::vector<double>& full, std::vector<bool>& kept, std::size_t cap = DimensionCaps{}.classical) const;

  /// Renormalized truncated state as a dense vector.
  [[nodiscard]] std::vector<double> truncated(std::size_t cap = DimensionCaps{}.classical) const {
    std::vector<double> full;
    std::vector<bool> kept;
    materialize(full, kept, cap);
    double mass = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (kept[i]) mass += full[i];
    }
    if (!(mass > 0.0)) throw DegenerateTruncation("typical truncation: no typical tuple");
    std::vector<double> out(full.size(), 0.0);
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (kept[i]) out[i] = full[i] / mass;
    }
    return out;
  }
};

namespace detail {

inline void enumerate_compositions(std::size_t d, std::size_t n, std::vector<std::size_t>& current, std::size_t pos,
                                   std::size_t left, std::vector<std::vector<std::size_t>>& out) {
  if (pos + 1 == d) {
    current[pos] = left;
    out.push_back(current);
    return;
  }
  for (std::size_t c = left + 1; c-- > 0;) {
    current[pos] = c;
    enumerate_compositions(d, n, current, pos + 1, left - c, out);
  }
}

inline double composition_count(std::size_t d, std::size_t n) {
  return std::exp(std::lgamma(static_cast<double>(n + d)) - std::lgamma(static_cast<double>(n + 1)) -
                  std::lgamma(static_cast<double>(d)));
}

/// Multinomial coefficient as a product of binomials; exact while below 2^53.
inline double multinomial(const std::vector<std::size_t>& counts) {
  double result = 1.0;
  double running = 0.0;
  for (auto c : counts) {
    for (std::size_t i = 1; i <= c; ++i) {
      running += 1.0;
      result = result * running / static_cast<double>(i);
    }
  }
  return std::round(result);
}

}  // namespace detail

/// Builds the truncation per type class, so large n stays cheap as long as the
/// number of compositions of n into d parts is moderate.
inline TypicalTruncation typical_truncate(std::span<const double> p, std::size_t n, double delta,
                                          std::size_t class_cap = DimensionCaps{}.classical) {
  if (n == 0) throw ValidationError("typical_truncate: n must be at least 1");
  if (!(delta > 0.0)) throw ValidationError("typical_truncate: delta must be positive");
  const ProbabilityVector checked{std::vector<double>(p.begin(), p.end())};
  const std::size_t d = p.size();
  if (detail::composition_count(d, n) > static_cast<double>(class_cap)) {
    throw DimensionCapExceeded("typical_truncate: too many type classes");
  }
  TypicalTruncation t;
  t.base = checked.values();
  t.n = n;
  t.delta = delta;
  t.entropy = shannon_entropy(t.base);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> current(d, 0);
  detail::enumerate_compositions(d, n, current, 0, n, comps);
  double tail = 0.0;
  for (auto& counts : comps) {
    TypeClass c;
    double log_prob = 0.0;
    double surprisal = 0.0;
    bool possible = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (counts[i] == 0) continue;
      if (t.base[i] <= 0.0) {
        possible = false;
        continue;
      }
      const double lp = std::log(t.base[i]);
      log_prob += static_cast<double>(counts[i]) * lp;
      surprisal -= static_cast<double>(counts[i]) * lp;
    }
    c.multiplicity = detail::multinomial(counts);
    c.counts = std::move(counts);
    if (possible) {
      c.log_probability = log_prob;
      c.surprisal = surprisal / static_cast<double>(n);
      c.kept = std::abs(c.surprisal - t.entropy) < delta;
    } else {
      c.log_probability = -std::numeric_limits<double>::infinity();
      c.surprisal = std::numeric_limits<double>::infinity();
      c.kept = false;
    }
    if (c.kept) {
      t.kept_count += c.multiplicity;
    } else if (possible) {
      tail += c.mass();
    }
    t.classes.push_back(std::move(c));
  }
  if (t.kept_count == 0.0) {
    throw DegenerateTruncation("typical_truncate: no tuple is typical for n=" + std::to_string(n) +
                               " delta=" + std::to_string(delta));
  }
  t.tail_mass = std::min(1.0, tail);
  return t;
}

inline TypicalTruncation typical_truncate(const ProbabilityVector& p, std::size_t n, double delta) {
  return typical_truncate(p.entries(), n, delta);
}

/// Truncation of the n-copy spectrum; kept tuples refer to the descending eigenbasis.
inline TypicalTruncation typical_truncate(const DensityMatrix& rho, std::size_t n, double delta) {
  const auto values = rho.eigenvalues();
  return typical_truncate(std::span<const double>(values), n, delta);
}

inline void TypicalTruncation::materialize(std::vector<double>& full, std::vector<bool>& kept, std::size_t cap) const {
  const std::size_t d = base.size();
  full = power_entries(base, n, cap);
  kept.assign(full.size(), false);
  std::map<std::vector<std::size_t>, bool> lookup;
  for (const auto& c : classes) lookup.emplace(c.counts, c.kept);
  std::vector<std::size_t> digits(n, 0);
  std::vector<std::size_t> counts(d, 0);
  counts[0] = n;
  for (std::size_t i = 0; i < full.size(); ++i) {
    kept[i] = lookup.at(counts);
    for (std::size_t f = n; f-- > 0;) {
      --counts[digits[f]];
      if (++digits[f] < d) {
        ++counts[digits[f]];
        break;
      }
      digits[f] = 0;
      ++counts[0];
    }
  }
}

/// Surprisal spread max ln(1/p_i) - min ln(1/p_i) over the nonzero entries.
inline double surprisal_spread(std::span<const double> p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : p) {
    if (x > 0.0) {
      lo = std::min(lo, -std::log(x));
      hi = std::max(hi, -std::log(x));
    }
  }
  return hi > lo ? hi - lo : 0.0;
}

/// Hoeffding bound 2 exp(-2 n delta^2 / R^2) on the atypical mass (0 when R = 0).
inline double hoeffding_tail_bound(std::span<const double> p, std::size_t n, double delta) {
  const double r = surprisal_spread(p);
  if (r == 0.0) return 0.0;
  return 2.0 * std::exp(-2.0 * static_cast<double>(n) * delta * delta / (r * r));
}

struct ProjectorSizeBounds {
  double lower = 0.0;
  double upper = 0.0;
  double count = 0.0;
  double min_kept_probability = 0.0;
  double max_kept_probability = 0.0;
  double eigenvalue_floor = 0.0;  // e^{-n(H+delta)}
  double eigenvalue_ceiling = 0.0;  // e^{-n(H-delta)}
};

/// Kept-tuple count with (1 - tail) e^{n(H-delta)} <= count <= e^{n(H+delta)}, and
/// the range of kept tuple probabilities against [e^{-n(H+delta)}, e^{-n(H-delta)}].
inline ProjectorSizeBounds projector_size_bounds(const TypicalTruncation& t) {
  ProjectorSizeBounds b;
  const double nn = static_cast<double>(t.n);
  b.count = t.kept_count;
  b.upper = std::exp(nn * (t.entropy + t.delta));
  b.lower = (1.0 - t.tail_mass) * std::exp(nn * (t.entropy - t.delta));
  b.eigenvalue_floor = std::exp(-nn * (t.entropy + t.delta));
  b.eigenvalue_ceiling = std::exp(-nn * (t.entropy - t.delta));
  b.min_kept_probability = std::numeric_limits<double>::infinity();
  b.max_kept_probability = 0.0;
  for (const auto& c : t.classes) {
    if (!c.kept) continue;
    b.min_kept_probability = std::min(b.min_kept_probability, c.probability());
    b.max_kept_probability = std::max(b.max_kept_probability, c.probability());
  }
  return b;
}

/// Certified total error 4 exp(-n dH^2 / (8 R^2)) of the two-state assembly at
/// delta = dH/4, where R bounds the surprisal spread of both states.
inline double error_bound(double entropy_gap, std::size_t n, double spread = 1.0) {
  if (!(entropy_gap > 0.0)) throw EntropyGapError("error_bound: entropy gap must be positive");
  if (spread <= 0.0) return 0.0;
  return 4.0 * std::exp(-static_cast<double>(n) * entropy_gap * entropy_gap / (8.0 * spread * spread));
}

struct SizeEstimate {
  std::size_t n_estimate = 1;
  double n_continuous = 0.0;
  double log_catalyst_dim = 0.0;  // nats
  double catalyst_dim = 1.0;  // may be +inf
};

/// Smallest n with error_bound(dH, n, spread) <= eps, and the resulting catalyst
/// size d^{n-1} * n * d^n (S2..Sn, A, and a worst-case R register).
inline SizeEstimate size_estimate(double entropy_gap, double eps, double spread = 1.0, std::size_t d = 2) {
  if (!(entropy_gap > 0.0)) throw EntropyGapError("size_estimate: entropy gap must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("size_estimate: epsilon must lie in (0, 1)");
  SizeEstimate s;
  s.n_continuous = 8.0 * spread * spread * std::log(4.0 / eps) / (entropy_gap * entropy_gap);
  s.n_estimate = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s.n_continuous)));
  const double nn = static_cast<double>(s.n_estimate);
  const double ld = std::log(static_cast<double>(d));
  s.log_catalyst_dim = (nn - 1.0) * ld + std::log(nn) + nn * ld;
  s.catalyst_dim = std::exp(s.log_catalyst_dim);
  return s;
}

}  // namespace catalysis
