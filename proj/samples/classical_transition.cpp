#include <cstdio>

#include "catalysis/catalysis.hpp"

using namespace catalysis;

int main() {
  const ProbabilityVector p({0.9, 0.1});
  const ProbabilityVector pp({0.7, 0.3});
  std::printf("  n   catalyst dim   distance   certified   residual\n");
  for (std::size_t n : {2, 4, 6, 8, 10}) {
    ClassicalOptions o;
    o.forced_n = n;
    try {
      auto [cat, perm] = build_classical_catalyst(p, pp, o);
      const auto rep = apply_protocol(p, cat, perm).second;
      std::printf("%3zu %14zu %10.5f %11.5f %10.2g\n", n, cat.q.size(), rep.output_distance, rep.eps_certified,
                  rep.catalyst_residual);
    } catch (const DimensionCapExceeded& e) {
      std::printf("%3zu  %s\n", n, e.what());
    }
  }
}
