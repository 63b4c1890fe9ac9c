#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "holoflow/classify.hpp"

using namespace holoflow;

namespace {

AnalyticMap P(const char* s) { return AnalyticMap::parse(s); }

// φ_a ∘ (e^{i}z) ∘ φ_a with φ_a(z) = (a − z)/(1 − āz): elliptic of infinite order, fixing a.
AnalyticMap elliptic_about(double a) {
  auto s = std::to_string(a);
  auto rot = "(0.5403023058681398+0.8414709848078965*i)";
  std::string inner = "((" + std::string(rot) + ")*(" + s + "-z)/(1-" + s + "*z))";
  return AnalyticMap::parse("(" + s + "-" + inner + ")/(1-" + s + "*" + inner + ")");
}

ClassificationReport run(const std::string& space, const char* phi, std::optional<const char*> w = {}) {
  std::optional<AnalyticMap> wm;
  if (w) wm = P(*w);
  return classify_discrete(SpaceTag::parse(space), P(phi), wm);
}

}  // namespace

TEST_CASE("space tag parsing") {
  CHECK(SpaceTag::parse("H2").family == SpaceFamily::hardy);
  CHECK(SpaceTag::parse("H1.5").p == 1.5);
  auto a = SpaceTag::parse("A2_0.5");
  CHECK(a.family == SpaceFamily::bergman);
  CHECK(a.beta == 0.5);
  CHECK(SpaceTag::parse("A2", 1.5).beta == 1.5);
  CHECK(SpaceTag::parse("B").is_bloch());
  CHECK(SpaceTag::parse("B^1").is_bloch());
  CHECK_FALSE(SpaceTag::parse("B^2").is_bloch());
  CHECK(SpaceTag::parse("B0").family == SpaceFamily::little_bloch);
  CHECK(SpaceTag::parse("Hinf_3").p == 3.0);
  CHECK(SpaceTag::parse("Hinf", 0.0, 2.0).p == 2.0);
  CHECK_THROWS_AS(SpaceTag::parse("Q2"), ParseError);
  CHECK_THROWS_AS(SpaceTag::parse("A2_-3"), ParseError);
  for (const char* s : {"H2", "A2_0.5", "B", "B0", "B^2", "Hinf_3"}) CHECK(SpaceTag::parse(SpaceTag::parse(s).name()).name() == s);
}

TEST_CASE("table rows for unweighted symbols") {
  auto half = run("H2", "z/2");
  CHECK(half.mode == ConvergenceMode::uniform);
  CHECK_FALSE(half.isometric);
  CHECK_FALSE(half.similar_to_isometry);

  auto sq = run("H2", "z^2");
  CHECK(sq.mode == ConvergenceMode::weak);
  CHECK(sq.isometric);
  CHECK(sq.similar_to_isometry);

  auto hyp = run("H2", "(z+0.5)/(1+0.5*z)");
  CHECK(hyp.mode == ConvergenceMode::none);
  CHECK_FALSE(hyp.isometric);
  CHECK_FALSE(hyp.similar_to_isometry);

  auto ell = classify_discrete(SpaceTag::parse("A2_0"), elliptic_about(0.3));
  CHECK(ell.mode == ConvergenceMode::none);
  CHECK_FALSE(ell.isometric);
  CHECK(ell.similar_to_isometry);

  auto rot = run("A2_0", "(0.5403023058681398+0.8414709848078965*i)*z");
  CHECK(rot.mode == ConvergenceMode::none);
  CHECK(rot.isometric);
  CHECK(rot.similar_to_isometry);

  auto rot_b0 = run("B0", "(0.5403023058681398+0.8414709848078965*i)*z");
  CHECK(rot_b0.isometric);
  CHECK(rot_b0.similar_to_isometry);

  auto hinf = run("Hinf_1", "z/2");
  CHECK(hinf.mode == ConvergenceMode::uniform);
  CHECK_FALSE(hinf.isometric);
}

TEST_CASE("inner symbol fixing a nonzero point is only similar to an isometry") {
  // z ↦ φ_a(φ_a(z)²), inner with fixed point a = 0.3 (φ_a an involution)
  std::string pa = "((0.3-z)/(1-0.3*z))";
  std::string sq = "(" + pa + ")^2";
  auto phi = AnalyticMap::parse("(0.3-" + sq + ")/(1-0.3*" + sq + ")");
  auto rep = classify_discrete(SpaceTag::parse("H2"), phi);
  CHECK(rep.mode == ConvergenceMode::weak);
  CHECK_FALSE(rep.isometric);
  CHECK(rep.similar_to_isometry);
}

TEST_CASE("Bloch space gets isometry rows only") {
  auto sq = run("B", "z^2");
  CHECK_FALSE(sq.modes_tabulated);
  CHECK(sq.isometric);  // φ(0) = 0, τ = 1
  auto half = run("B", "z/2");
  CHECK_FALSE(half.isometric);
  CHECK_THROWS_AS(run("B", "z/2", "0.5"), Error);
}

TEST_CASE("weighted rows") {
  auto small = run("H2", "z/2", "0.5+0.1*z");
  CHECK(small.mode == ConvergenceMode::uniform);
  auto big = run("H2", "z/2", "2+0*z");
  CHECK(big.mode == ConvergenceMode::none);
  // inner symbol, |w(0)| < 1: weak, r_e < 1 not established
  auto inner = run("H2", "z^2", "0.5+0*z");
  CHECK(inner.mode == ConvergenceMode::weak);
  // |w(α)| = 1: decided by the power probe
  auto unit = run("H2", "z/2", "1+0*z");
  CHECK(unit.mode == ConvergenceMode::uniform);
  CHECK_FALSE(unit.heuristics.empty());
}

TEST_CASE("weighted elliptic regime") {
  auto phi = elliptic_about(0.0);
  try {
    classify_discrete(SpaceTag::parse("H2"), phi, P("0.5+0*z"));
    FAIL("expected missing assertion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_assertion);
  }
  DiscreteProbes pr;
  pr.weight_in_disc_algebra = true;
  auto rep = classify_discrete(SpaceTag::parse("H2"), phi, P("0.5+0*z"), pr);
  CHECK(rep.mode == ConvergenceMode::uniform);
  try {
    classify_discrete(SpaceTag::parse("H2"), P("-z"), P("0.5+0*z"), pr);
    FAIL("expected wrong regime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wrong_regime);
  }
}

TEST_CASE("semigroup limit examples") {
  auto neg = classify_semigroup_limit(P("-z"));
  CHECK(neg.converges);
  REQUIRE(neg.zero);
  CHECK(std::abs(*neg.zero) < 1e-10);
  CHECK(std::abs(neg.witness_value + 1.0) < 1e-6);

  auto sq = classify_semigroup_limit(P("(1-z)^2"));
  CHECK_FALSE(sq.converges);
  CHECK_FALSE(sq.zero);

  auto rot = classify_semigroup_limit(P("-i*z"));
  CHECK_FALSE(rot.converges);
  CHECK(rot.zero);
  CHECK_FALSE(rot.witness_angle);
}
