#include <cstdio>

#include "catalysis/catalysis.hpp"

using namespace catalysis;

int main() {
  Matrix target(2, 2);
  target << 0.6, Complex(0.1, 0.05), Complex(0.1, -0.05), 0.4;
  const DensityMatrix rho = DensityMatrix::diagonal(ProbabilityVector({0.9, 0.1}));
  const DensityMatrix rho_prime(target);

  for (std::size_t n : {2, 4, 6, 8}) {
    QuantumOptions o;
    o.forced_n = n;
    const auto cat = build_quantum_catalyst(rho, rho_prime, o);
    const auto run = apply_quantum_protocol(rho, cat);
    const auto& r = run.report;
    std::printf("n=%zu  catalyst dim %4zu  distance %.5f  per-site bound %.5f  residual %.2g  dS=%.5f I=%.5f\n", n,
                cat.catalyst_dimension(), r.output_distance, run.per_site_bound, r.catalyst_residual,
                r.entropy_out - r.entropy_in, r.mutual_information);
  }
}
