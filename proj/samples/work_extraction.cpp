#include <cstdio>

#include "catalysis/catalysis.hpp"

using namespace catalysis;

int main() {
  const auto h = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  const auto rho = DensityMatrix::diagonal(ProbabilityVector({0.5, 0.5, 0.0}));

  const auto w = catalytic_work(rho, h);
  std::printf("beta(rho)        %.10f\n", w.beta);
  std::printf("energy           %.10f\n", w.energy);
  std::printf("Gibbs energy     %.10f\n", w.gibbs_energy);
  std::printf("ergotropy        %.10f\n", ergotropy(rho, h));
  std::printf("catalytic work   %.10f\n", w.value);
  std::printf("sampling: %zu states (seed %llu), closest %.3g above the Gibbs energy\n", w.samples,
              static_cast<unsigned long long>(w.seed), w.min_gap);
}
