#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "holoflow/compactness.hpp"
#include "holoflow/semiflow.hpp"

using namespace holoflow;

namespace {

AnalyticMap P(const char* s) { return AnalyticMap::parse(s); }

// Flow of 2z/(z−1): sampled directly from the ODE.
auto spiral_flow() { return ode_flow(P("2*z/(z-1)")); }

}  // namespace

TEST_CASE("compactness criterion examples") {
  auto neg = compactness_criterion(P("-z"));
  CHECK(neg.curves[0].infinite);
  // values ~ r/(1−r): the last sample sits near 2^k
  CHECK(neg.curves[0].values.back() > 1e4);

  auto sq = compactness_criterion(P("(1-z)^2"));
  CHECK_FALSE(sq.immediately_compact);
  CHECK_FALSE(sq.curves[0].infinite);
  CHECK(std::abs(sq.curves[0].limit) < 1e-6);
  // |1−ξ|²/|z−ξ| blows up at every other ξ
  CHECK(sq.finite_count == 1);
  CHECK(sq.min_finite_angle == 0.0);

  auto sp = compactness_criterion(P("2*z/(z-1)"));
  CHECK(sp.immediately_compact);
  for (const auto& c : sp.curves) CHECK(c.infinite);
}

TEST_CASE("compactness curve at xi = 1 follows |1 - r| exactly") {
  auto sq = compactness_criterion(P("(1-z)^2"), 8);
  const auto& c = sq.curves[0];
  for (std::size_t i = 0; i < c.radii.size(); ++i) CHECK(std::abs(c.values[i] - (1.0 - c.radii[i])) < 1e-12);
}

TEST_CASE("analyticity probe examples") {
  auto a = analyticity_probe(P("(1-z)^2"));
  CHECK(a.analytic);
  CHECK(a.steps >= 1);

  auto b = analyticity_probe(P("2*z/(z-1)"));
  CHECK_FALSE(b.analytic);
  CHECK(b.theta == 0.0);

  auto c = analyticity_probe(P("-z"));
  CHECK(c.analytic);
  CHECK(c.theta >= std::numbers::pi / 2 - std::numbers::pi / 64 - 1e-12);
}

TEST_CASE("analyticity sector shrinks under rotation of the generator") {
  // e^{iα}·(−z) has boundary value −cos(α ± θ); the sector loses α.
  double alpha = 8 * std::numbers::pi / 64;
  auto base = analyticity_probe(P("-z"));
  AnalyticMap rotated = std::polar(1.0, alpha) * P("-z");
  auto rot = analyticity_probe(rotated);
  CHECK(rot.analytic);
  CHECK(rot.steps <= base.steps);
  CHECK(rot.steps >= base.steps - 9);
}

TEST_CASE("univalent compactness examples") {
  auto half = univalent_compactness_check(P("z/2"));
  CHECK(half.compact);
  CHECK(half.max_limit < 1e-6);

  auto aut = univalent_compactness_check(P("(z+0.5)/(1+0.5*z)"));
  CHECK_FALSE(aut.compact);
  CHECK(aut.max_limit > 0.1);

  auto horo = univalent_compactness_check(P("(1+z)/2"), 8);
  CHECK_FALSE(horo.compact);
  CHECK(std::abs(horo.curves[0].limit - 2.0) < 1e-3);
}

TEST_CASE("supnorm examples") {
  auto contraction = [](double t, complex z) { return std::exp(-t) * z; };
  for (double t : {0.1, 0.5, 1.0}) {
    auto s = supnorm_semiflow(contraction, t);
    CHECK(std::abs(s.estimate - std::exp(-t) * (1.0 - 1e-6)) < 1e-12);
    CHECK(s.trace_class);
  }
  auto aut = FlowSpec::elliptic(0.0, 1.0);
  auto rot = [&](double t, complex z) { return make_flow(aut, t, z); };
  auto s = supnorm_semiflow(rot, 0.7);
  CHECK(std::abs(s.estimate - 1.0) < 1e-5);
  CHECK_FALSE(s.trace_class);

  auto sp = supnorm_semiflow(spiral_flow(), 0.5);
  CHECK(sp.estimate < 1.0);
  CHECK(sp.trace_class);
}

TEST_CASE("supnorm below 1 for all t goes with an infinite criterion everywhere") {
  std::vector<double> times;
  for (int k = 1; k <= 10; ++k) times.push_back(0.1 * k);
  auto scan = supnorm_scan(spiral_flow(), times);
  CHECK(scan.onset == CompactOnset::immediate);
  for (const auto& p : scan.points) CHECK(p.estimate < 1.0);
  CHECK(compactness_criterion(P("2*z/(z-1)")).immediately_compact);

  // automorphism flow: never
  auto aut = FlowSpec::hyperbolic(1.0, -1.0, 1.0);
  auto scan2 = supnorm_scan([&](double t, complex z) { return make_flow(aut, t, z); }, times);
  CHECK(scan2.onset == CompactOnset::never);
}
