// Walks one generator through the toolkit: generator criteria, flow,
// Denjoy-Wolff point, semigroup limit, compactness and analyticity.
//
//   semiflow_tour ["<generator>"]     default (1-z)^2

#include <cstdio>

#include "holoflow/holoflow.hpp"

using namespace holoflow;

int main(int argc, char** argv) {
  const char* text = argc > 1 ? argv[1] : "(1-z)^2";
  try {
    auto G = AnalyticMap::parse(text);
    std::printf("G(z) = %s\n", G.to_string().c_str());

    auto chk = generator_check(G);
    std::printf("generator check: %s (worst interior %.3g)\n", chk.pass() ? "pass" : "fail", chk.worst_interior_value);
    if (!chk.pass()) return 2;

    std::printf("trajectory of 1/2:\n");
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      complex u = integrate_semiflow(G, 0.5, t);
      std::printf("  t=%-4g  %+.12f %+.12fi\n", t, u.real(), u.imag());
    }

    auto lim = classify_semigroup_limit(G);
    if (lim.zero)
      std::printf("interior zero of G (Denjoy-Wolff point): %+.8f %+.8fi\n", lim.zero->real(), lim.zero->imag());
    else
      std::printf("no interior zero: the Denjoy-Wolff point is on the circle\n");
    std::printf("T_t converges uniformly: %s\n", lim.converges ? "yes" : "no");

    auto cmp = compactness_criterion(G);
    std::printf("immediately compact: %s (%d finite radial limits)\n", cmp.immediately_compact ? "yes" : "no",
                cmp.finite_count);

    auto an = analyticity_probe(G);
    std::printf("analytic: %s, sector half-angle %.4f\n", an.analytic ? "yes" : "no", an.theta);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
    return e.code() == ErrorCode::parse ? 1 : 2;
  }
  return 0;
}
