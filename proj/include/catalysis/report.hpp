#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "catalysis/core.hpp"

namespace catalysis {

struct TransitionDims {
  std::size_t system = 0;
  std::size_t catalyst_total = 1;
  std::size_t n = 1;
  std::size_t a = 1;
  std::size_t r = 1;
};

/// Verification record of one catalytic transition.
struct TransitionReport {
  double catalyst_residual = 0.0;
  double output_distance = 0.0;
  double eps_certified = 0.0;
  double eps_claim = 0.0;
  double eps_ncopy = 0.0;
  double entropy_in = 0.0;
  double entropy_out = 0.0;
  double mutual_information = 0.0;
  /// Largest mismatch between sorted joint spectra before and after (reversibility check).
  double spectrum_residual = 0.0;
  TransitionDims dims;
  bool fallback = false;
  bool bypass = false;
  bool pass = false;
  /// System output distribution (classical) or output eigenvalues (quantum).
  std::vector<double> output;
  /// Quantum system output; empty for classical runs.
  Matrix output_matrix;
  std::vector<std::pair<std::string, double>> timings;

  /// residual <= 1e-10 and distance <= max(eps_certified, eps_claim) + 1e-12.
  void decide(double residual_tolerance = tol::catalyst_residual) {
    pass = catalyst_residual <= residual_tolerance &&
           output_distance <= std::max(eps_certified, eps_claim) + tol::distance_slack &&
           spectrum_residual <= tol::unitary;
  }
};

/// Wall-clock stopwatch feeding TransitionReport::timings.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}

  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace catalysis
