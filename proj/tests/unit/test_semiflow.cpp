#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "holoflow/generator_criteria.hpp"
#include "holoflow/semiflow.hpp"

using namespace holoflow;

namespace {

const complex I(0.0, 1.0);

std::vector<FlowSpec> sample_specs() {
  return {FlowSpec::elliptic(0.0, std::numbers::pi), FlowSpec::elliptic(complex(0.3, -0.2), 1.5),
          FlowSpec::hyperbolic(1.0, -1.0, 2.0), FlowSpec::hyperbolic(I, std::polar(1.0, 2.5), 0.7),
          FlowSpec::parabolic(1.0, 1.0), FlowSpec::parabolic(std::polar(1.0, -1.0), -0.5)};
}

struct Triple {
  complex z;
  double s, t;
};

std::vector<Triple> random_triples(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Triple> out;
  for (int i = 0; i < n; ++i) out.push_back({std::polar(0.95 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)), u(rng), u(rng)});
  return out;
}

}  // namespace

TEST_CASE("make_flow examples") {
  for (const auto& s : sample_specs()) CHECK(std::abs(make_flow(s, 0.0, complex(0.2, 0.4)) - complex(0.2, 0.4)) < 1e-15);
  auto e = FlowSpec::elliptic(0.0, std::numbers::pi);
  CHECK(std::abs(make_flow(e, 1.0, complex(0.3, 0.1)) + complex(0.3, 0.1)) < 1e-15);
  auto h = FlowSpec::hyperbolic(1.0, -1.0, 2.0);
  CHECK(std::abs(make_flow(h, 1.0, 0.0) - std::tanh(1.0)) < 1e-12);
}

TEST_CASE("degenerate specs are rejected") {
  CHECK_THROWS_AS(FlowSpec::elliptic(0.0, 0.0), Error);
  CHECK_THROWS_AS(FlowSpec::elliptic(1.0, 1.0), Error);
  CHECK_THROWS_AS(FlowSpec::hyperbolic(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(FlowSpec::hyperbolic(1.0, -1.0, 0.0), Error);
  CHECK_THROWS_AS(FlowSpec::hyperbolic(0.5, -1.0, 1.0), Error);
  CHECK_THROWS_AS(FlowSpec::parabolic(0.5, 1.0), Error);
  CHECK_THROWS_AS(FlowSpec::parabolic(1.0, 0.0), Error);
  try {
    FlowSpec::parabolic(1.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parameter_domain);
  }
}

TEST_CASE("flows are automorphisms with the right fixed points") {
  for (const auto& s : sample_specs()) {
    for (double t : {0.3, 1.0, 2.7}) {
      auto m = s.at(t);
      CHECK(m.is_disc_automorphism());
      for (int j = 0; j < 32; ++j) CHECK(std::abs(std::abs(m.apply(std::polar(1.0, 0.2 * j))) - 1.0) < 1e-10);
      CHECK(std::abs(m.apply(s.alpha) - s.alpha) < 1e-10);
      if (s.variant == FlowVariant::hyperbolic) CHECK(std::abs(m.apply(s.alpha2) - s.alpha2) < 1e-10);
    }
  }
  // Hyperbolic multiplier at the attracting point: e^{−ct}.
  auto h = FlowSpec::hyperbolic(I, -1.0, 0.7);
  CHECK(std::abs(h.at(1.3).derivative(I) - std::exp(-0.7 * 1.3)) < 1e-10);
}

TEST_CASE("semigroup law for closed-form flows") {
  for (const auto& s : sample_specs()) {
    double worst = 0.0;
    for (auto [z, a, b] : random_triples(50, 17))
      worst = std::max(worst, std::abs(make_flow(s, a + b, z) - make_flow(s, b, make_flow(s, a, z))));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("model_semiflow examples") {
  SemiflowModel id{AnalyticMap::identity(), ModelMode::interior, 1.0};
  for (double t : {0.1, 1.0, 3.0}) CHECK(std::abs(model_semiflow(id, t, complex(0.4, 0.2)) - std::exp(-t) * complex(0.4, 0.2)) < 1e-12);
  SemiflowModel koebe{AnalyticMap::parse("z/(1-z)"), ModelMode::interior, 1.0};
  for (double t : {0.2, 1.0}) {
    complex z(0.3, -0.5);
    complex e = std::exp(-t);
    CHECK(std::abs(model_semiflow(koebe, t, z) - e * z / (1.0 - z + e * z)) < 1e-10);
  }
  SemiflowModel bnd{AnalyticMap::parse("1i*(1+z)/(1-z)"), ModelMode::boundary};
  for (double t : {0.5, 2.0}) CHECK(std::abs(model_semiflow(bnd, t, 0.0) - t / (2.0 + t)) < 1e-10);
  SemiflowModel bad{AnalyticMap::parse("z+1"), ModelMode::interior};
  CHECK_THROWS_AS(model_semiflow(bad, 1.0, 0.1), Error);
}

TEST_CASE("model semigroup law") {
  SemiflowModel spiral{AnalyticMap::parse("z/(1-z)^2"), ModelMode::interior, complex(1.0, 0.5)};
  double worst = 0.0;
  for (auto [z, a, b] : random_triples(50, 23)) {
    z *= 0.8;
    worst = std::max(worst, std::abs(model_semiflow(spiral, a + b, z) -
                                     model_semiflow(spiral, b, model_semiflow(spiral, a, z))));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("integrate_semiflow examples") {
  auto G = AnalyticMap::parse("-z");
  for (double t : {0.5, 2.0}) CHECK(std::abs(integrate_semiflow(G, complex(0.3, 0.6), t) - std::exp(-t) * complex(0.3, 0.6)) < 1e-9);
  auto P = AnalyticMap::parse("(1-z)^2");
  for (double t : {0.25, 1.0, 3.0})
    for (complex z : {complex(0.0), complex(-0.5, 0.3), complex(0.7, 0.0)})
      CHECK(std::abs(integrate_semiflow(P, z, t) - ((1 - t) * z + t) / (-t * z + 1.0 + t)) < 1e-7);
  auto K = AnalyticMap::parse("2*z/(z-1)");
  for (double t : {0.3, 1.0}) {
    complex z(0.4, 0.2);
    complex u = integrate_semiflow(K, z, t);
    CHECK(std::abs(u * std::exp(-u) - std::exp(-2 * t) * z * std::exp(-z)) < 1e-8);
  }
}

TEST_CASE("integrate_semiflow escapes for non-generators") {
  try {
    integrate_semiflow(AnalyticMap::parse("z"), 0.5, 2.0);
    FAIL("expected escape");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain_escape);
  }
}

TEST_CASE("generator_of examples") {
  auto exp_flow = [](double t, complex z) { return std::exp(-t) * z; };
  for (complex z : {complex(0.1, 0.2), complex(-0.6, 0.0)}) {
    auto est = generator_of(exp_flow, z);
    CHECK(std::abs(est.value + z) < 1e-9);
    CHECK(est.continuity_ok);
  }
  auto ell = FlowSpec::elliptic(0.0, 1.7);
  auto flow = [&](double t, complex z) { return make_flow(ell, t, z); };
  complex z(0.3, 0.3);
  CHECK(std::abs(generator_of(flow, z).value + I * 1.7 * z) < 1e-8);
  auto est = generator_of(ode_flow(AnalyticMap::parse("(1-z)^2")), 0.0);
  CHECK(std::abs(est.value - 1.0) < 1e-6);
  // A non-differentiable time dependence is rejected.
  auto rough = [](double t, complex z) { return z + std::sqrt(t); };
  CHECK_THROWS_AS(generator_of(rough, 0.1), Error);
}

TEST_CASE("closed form vs ODE from the estimated generator") {
  for (const auto& s : sample_specs()) {
    auto G = s.generator();
    auto flow = [&](double t, complex z) { return make_flow(s, t, z); };
    for (complex z : {complex(0.2, -0.1), complex(-0.5, 0.4)}) {
      CHECK(std::abs(generator_of(flow, z).value - G(z)) < 1e-7);
      CHECK(std::abs(integrate_semiflow(G, z, 1.0) - make_flow(s, 1.0, z)) < 1e-7);
    }
  }
}

TEST_CASE("generator_check examples") {
  auto neg = generator_check(AnalyticMap::parse("-z"));
  CHECK(neg.pass());
  auto pos = generator_check(AnalyticMap::parse("z"));
  CHECK_FALSE(pos.interior_ok);
  CHECK(std::abs(pos.worst_interior_value - (1.0 + 0.99 * 0.99)) < 1e-9);  // 1 + r², max at r = 0.99
  auto parab = generator_check(AnalyticMap::parse("(1-z)^2"));
  CHECK(parab.pass());
  // Interior quantity at z = 0 for G = z is exactly 1.
  Jet j = AnalyticMap::parse("z").jet(0.0);
  CHECK(std::abs((2.0 * std::conj(complex(0.0)) * j.value + j.derivative).real() - 1.0) < 1e-15);
}

TEST_CASE("every FlowSpec generator passes both criteria") {
  for (const auto& s : sample_specs()) {
    auto G = s.generator();
    CHECK(generator_check(G).pass());
    CHECK(berkson_porta_factor(G, s.alpha).pass);
  }
}

TEST_CASE("berkson_porta_factor examples") {
  auto a = berkson_porta_factor(AnalyticMap::parse("-z"), 0.0);
  CHECK(std::abs(a.min_re_F - 1.0) < 1e-12);
  CHECK(a.pass);
  CHECK(a.skipped == 1);
  auto b = berkson_porta_factor(AnalyticMap::parse("(1-z)^2"), 1.0);
  CHECK(b.pass);
  CHECK(std::abs(b.min_re_F - 1.0) < 1e-9);
  auto c = berkson_porta_factor(AnalyticMap::parse("-z*(z-1)/(z+1)"), 0.0);
  CHECK(c.min_re_F < 0.0);
  CHECK_FALSE(c.pass);
}

TEST_CASE("boundary_generator_check examples") {
  auto a = boundary_generator_check(AnalyticMap::parse("-z"));
  CHECK(a.pass);
  CHECK(std::abs(a.max_value + 1.0) < 1e-6);
  CHECK(a.h1_certified);
  auto b = boundary_generator_check(AnalyticMap::parse("z"));
  CHECK_FALSE(b.pass);
  CHECK(std::abs(b.max_value - 1.0) < 1e-6);
  auto gap = AnalyticMap::parse("-z*(z-1)/(z+1)");
  auto c = boundary_generator_check(gap);
  CHECK(c.pass);
  CHECK_FALSE(berkson_porta_factor(gap, 0.0).pass);
  // |G| ~ 2/|1+z| near −1 is not integrable on circles: H¹ fails.
  CHECK(c.necessary_only);
}

TEST_CASE("grid evaluation independent of thread budget") {
  auto G = AnalyticMap::parse("(1-z)^2*exp(-z)");
  setenv("HOLOFLOW_THREADS", "1", 1);
  auto one = generator_check(G);
  setenv("HOLOFLOW_THREADS", "4", 1);
  auto four = generator_check(G);
  unsetenv("HOLOFLOW_THREADS");
  CHECK(one.worst_interior_value == four.worst_interior_value);
  CHECK(one.worst_boundary_value == four.worst_boundary_value);
}
