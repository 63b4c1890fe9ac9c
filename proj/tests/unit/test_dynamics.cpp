#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "holoflow/dynamics.hpp"
#include "holoflow/semiflow.hpp"

using namespace holoflow;

namespace {
const complex I(0.0, 1.0);

// Plain iteration oracle, independent of the library's stopping logic.
complex iterate(const AnalyticMap& phi, complex z, int n) {
  for (int i = 0; i < n; ++i) z = phi(z);
  return z;
}
}  // namespace

TEST_CASE("denjoy_wolff examples") {
  auto a = denjoy_wolff(AnalyticMap::parse("z/(2-z)"));
  CHECK(a.kind == DWKind::interior);
  CHECK(std::abs(a.point) < 1e-9);
  CHECK(std::abs(a.multiplier - 0.5) < 1e-9);
  CHECK(std::abs(iterate(AnalyticMap::parse("z/(2-z)"), 0.7, 60)) < 1e-12);

  auto hyp = AnalyticMap::parse("(z+0.5)/(1+0.5*z)");
  auto b = denjoy_wolff(hyp);
  CHECK(b.kind == DWKind::boundary);
  CHECK(std::abs(b.point - 1.0) < 1e-8);
  CHECK(std::abs(iterate(hyp, 0.0, 40) - 1.0) < 1e-8);

  auto c = denjoy_wolff(AnalyticMap::parse("1i*z"));
  CHECK(c.kind == DWKind::elliptic_automorphism);
  CHECK(std::abs(c.point) < 1e-12);
  CHECK(std::abs(c.multiplier - I) < 1e-12);
}

TEST_CASE("denjoy_wolff on non-Moebius symbols") {
  // φ(z) = (z² + z)/4 fixes 0 with φ′(0) = 1/4.
  auto a = denjoy_wolff(AnalyticMap::parse("(z^2+z)/4"));
  CHECK(a.kind == DWKind::interior);
  CHECK(a.method == "iteration");
  CHECK(std::abs(a.point) < 1e-9);
  CHECK(std::abs(a.multiplier - 0.25) < 1e-8);
  // φ(z) = (1+z)²/4 has boundary DW point 1 (φ(1) = 1, φ′(1) = 1).
  auto b = denjoy_wolff(AnalyticMap::parse("(1+z)^2/4"));
  CHECK(b.kind == DWKind::boundary);
  CHECK(std::abs(b.point - 1.0) < 1e-3);
  // Interior point away from 0: φ(z) = 0.5 + 0.3 z² fixes the root of 0.3x² − x + 0.5.
  auto c = denjoy_wolff(AnalyticMap::parse("0.5+0.3*z^2"));
  double root = (1.0 - std::sqrt(1.0 - 0.6)) / 0.6;
  CHECK(std::abs(c.point - root) < 1e-9);
}

TEST_CASE("denjoy_wolff rejects non-self-maps") {
  try {
    denjoy_wolff(AnalyticMap::parse("2*z"));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_self_map);
  }
}

TEST_CASE("flow maps have the designated DW point") {
  std::vector<FlowSpec> specs{FlowSpec::elliptic(complex(0.3, -0.2), 1.5), FlowSpec::hyperbolic(1.0, -1.0, 2.0),
                              FlowSpec::hyperbolic(I, std::polar(1.0, 2.5), 0.7), FlowSpec::parabolic(1.0, 1.0),
                              FlowSpec::parabolic(std::polar(1.0, -1.0), -0.5)};
  for (const auto& s : specs) {
    auto dw = denjoy_wolff(s.at(1.0).to_map());
    CHECK(std::abs(dw.point - s.attracting_point()) < 1e-7);
    if (s.variant == FlowVariant::elliptic) CHECK(dw.kind == DWKind::elliptic_automorphism);
    else CHECK(dw.kind == DWKind::boundary);
  }
}

TEST_CASE("inner_probe examples") {
  auto a = inner_probe(AnalyticMap::parse("z^2"));
  CHECK(a.inner);
  CHECK(std::abs(a.defect) < 1e-6);
  CHECK(a.heuristic);
  auto b = inner_probe(AnalyticMap::parse("z/2"));
  CHECK_FALSE(b.inner);
  CHECK(std::abs(b.defect - 0.75) < 1e-6);
  auto c = inner_probe(AnalyticMap::parse("(z-0.5)/(1-0.5*z)"));
  CHECK(c.inner);
}

TEST_CASE("inner verdict is automorphism invariant") {
  auto b = MoebiusTransform::blaschke_swap(complex(0.2, 0.4)).to_map();
  for (const char* text : {"z^2", "z/2", "(z+0.3)/2", "z^3"}) {
    auto phi = AnalyticMap::parse(text);
    CHECK(inner_probe(phi).inner == inner_probe(compose(b, phi)).inner);
  }
}

TEST_CASE("tau_phi_infty examples") {
  CHECK(std::abs(tau_phi_infty(AnalyticMap::parse("1i*z")).estimate - 1.0) < 1e-9);
  auto half = tau_phi_infty(AnalyticMap::parse("z/2"));
  CHECK(std::abs(half.estimate - 0.5) < 1e-12);
  CHECK(std::abs(half.argmax) < 1e-12);
  auto ell = FlowSpec::elliptic(complex(0.3, 0.1), 0.9).at(1.0).to_map();
  CHECK(std::abs(tau_phi_infty(ell).estimate - 1.0) < 1e-9);
}

TEST_CASE("tau estimate refines monotonically and obeys Schwarz-Pick") {
  auto phi = AnalyticMap::parse("(z^2+0.3)/(1+0.3*z^2)");
  double coarse = tau_phi_infty(phi, 64, 12).estimate;
  double fine = tau_phi_infty(phi, 128, 23).estimate;  // 128 is a refinement of 64; 23 radii of 12
  CHECK(coarse <= fine + 1e-15);
  CHECK(fine <= 1.0 + 1e-9);
}
