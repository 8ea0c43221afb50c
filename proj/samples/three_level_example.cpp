// The three-level example: rho cannot reach rho' directly, but a qubit
// catalyst and a four-transposition permutation make the transition exact.
#include <cstdio>

#include "catalysis/catalysis.hpp"

using namespace catalysis;

int main() {
  const ProbabilityVector p({0.5, 0.5, 0.0});
  const ProbabilityVector pp({2.0 / 3, 1.0 / 6, 1.0 / 6});
  const ProbabilityVector q({2.0 / 3, 1.0 / 3});

  std::printf("p majorizes p': %s, p' majorizes p: %s\n", majorizes(p, pp) ? "yes" : "no", majorizes(pp, p) ? "yes" : "no");

  // Joint index i * 2 + j: swaps (0,1)<->(1,0) and (1,1)<->(2,0).
  const Permutation perm(std::vector<std::size_t>{0, 2, 1, 4, 3, 5});
  const auto in = kron(p.entries(), q.entries());
  const auto out = perm.apply(in);
  const auto rep = verify_catalytic(in, out, SubsystemLayout({3, 2}, {"S", "C"}), pp.entries(), 0.0);

  std::printf("system out: %.6f %.6f %.6f\n", rep.output[0], rep.output[1], rep.output[2]);
  std::printf("catalyst residual %.3g, distance %.3g, I(S:C) = %.6f, pass = %s\n", rep.catalyst_residual,
              rep.output_distance, rep.mutual_information, rep.pass ? "true" : "false");
  return rep.pass ? 0 : 1;
}
