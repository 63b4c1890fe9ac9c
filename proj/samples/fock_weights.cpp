// Boundedness of f -> w (f o phi) on the Fock space for a small family of
// exp-quadratic weights w = exp(p + qz + rz^2) and phi = az + b. Prints the
// exact sup M and the r-test verdict side by side.

#include <cstdio>

#include "holoflow/holoflow.hpp"

using namespace holoflow;

int main() {
  FockSymbol s{0.6, complex(0.2, -0.3)};
  std::printf("phi(z) = %.2fz + (%.2f%+.2fi)\n", s.a.real(), s.b.real(), s.b.imag());
  std::printf("%8s %12s %10s %10s  %s\n", "r", "log M", "exact", "theorem", "note");
  for (double r : {0.0, 0.1, 0.2, 0.3, 0.32, 0.4, 0.5, 0.6}) {
    auto w = FockWeight::exp_quadratic(0.0, 0.5, r);
    auto rep = fock_weighted_bounded(w, s);
    std::printf("%8.3f %12.5g %10s %10s  %s\n", r, rep.log_M, to_string(*rep.exact), to_string(*rep.theorem),
                rep.explanation.c_str());
  }

  // Unimodular a: only w(0) e^{-conj(b) a z} gives a bounded operator.
  FockSymbol rot{std::polar(1.0, 0.7), complex(0.5, 0.0)};
  for (double w0 : {0.5, std::exp(-0.125), 0.95}) {
    std::printf("|a| = 1, w(0) = %.4f: powers bounded = %s\n", w0,
                fock_weighted_power_bounded(rot, w0) ? "yes" : "no");
  }
  return 0;
}
