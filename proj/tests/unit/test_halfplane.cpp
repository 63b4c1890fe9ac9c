#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "holoflow/halfplane.hpp"
#include "holoflow/operator.hpp"

using namespace holoflow;

namespace {

AnalyticMap H(const char* s) { return AnalyticMap::parse(s, Domain::halfplane); }

}  // namespace

TEST_CASE("angular derivative at infinity") {
  auto shift = angular_derivative_at_infinity(H("z+1"));
  CHECK(shift.bounded);
  CHECK(std::abs(shift.lambda - 1.0) < 1e-6);
  CHECK(std::abs(shift.norm - 1.0) < 1e-6);

  auto dil = angular_derivative_at_infinity(H("2*z"));
  CHECK(std::abs(dil.lambda - 0.5) < 1e-9);
  CHECK(std::abs(dil.norm - std::sqrt(0.5)) < 1e-9);

  // z² leaves ℂ₊; the limit itself is still 0
  CHECK_THROWS_AS(angular_derivative_at_infinity(H("z^2")), Error);
  auto sq = angular_derivative_at_infinity(H("z^2"), false);
  CHECK(sq.lambda == 0.0);
  CHECK_FALSE(sq.bounded);
}

TEST_CASE("angular derivative rejects maps leaving the half-plane") {
  try {
    angular_derivative_at_infinity(H("z-1"));
    FAIL("expected not_self_map");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_self_map);
  }
}

TEST_CASE("half-plane generator check") {
  auto neg = halfplane_generator_check(H("-z"));
  CHECK(neg.pass);
  CHECK(std::abs(neg.max_violation) < 1e-6);

  CHECK(halfplane_generator_check(H("1")).pass);

  auto sq = halfplane_generator_check(H("z^2"));
  CHECK_FALSE(sq.pass);
  CHECK(sq.max_violation > 0.5);
}

TEST_CASE("Arvanitidis exponent") {
  auto neg = arvanitidis_delta(H("-z"));
  CHECK(std::abs(neg.delta + 1.0) < 1e-9);
  CHECK(std::abs(neg.norm_at(1.0) - std::exp(0.5)) < 1e-9);

  auto one = arvanitidis_delta(H("1"));
  CHECK(one.delta == 0.0);
  CHECK(one.norm_at(3.0) == 1.0);

  auto id = arvanitidis_delta(H("z"));
  CHECK(std::abs(id.delta - 1.0) < 1e-9);
  CHECK(std::abs(id.norm_at(2.0) - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("Arvanitidis exponent matches the angular derivative of the flow") {
  // G = −z + 1: flow φ_t(z) = e^{−t}z + 1 − e^{−t}, λ(t) = e^{t}.
  auto rep = arvanitidis_delta(H("-z+1"));
  double t = 1.0;
  auto ad = angular_derivative_at_infinity(
      [&](complex z) { return std::exp(-t) * z + (1.0 - std::exp(-t)); });
  CHECK(std::abs(ad.lambda - std::exp(-rep.delta * t)) < 1e-2 * std::exp(t));
  CHECK(std::abs(ad.norm - rep.norm_at(t)) < 1e-2);
}

TEST_CASE("quasicontractive necessary condition") {
  auto neg = quasicontractive_necessary(H("-z"));
  CHECK(neg.necessary_ok);
  CHECK(std::abs(neg.inf_estimate + 1.0) < 1e-9);
  CHECK_FALSE(neg.contractive_candidate);

  auto sq = quasicontractive_necessary(H("-z^2"));
  CHECK(sq.divergent);
  CHECK(std::isinf(sq.inf_estimate));

  auto one = quasicontractive_necessary(H("1"));
  CHECK(one.necessary_ok);
  CHECK(one.inf_estimate >= 0.0);
  CHECK(one.inf_estimate < 1e-6);
  CHECK(one.contractive_candidate);
}

TEST_CASE("Cayley transfer examples") {
  auto id = halfplane_to_disc(H("z"));
  for (complex z : {complex(0.1, 0.2), complex(-0.5, 0.3), complex(0.0, -0.7)}) {
    CHECK(std::abs(id.Phi(z) - z) < 1e-12);
    CHECK(std::abs(id.w(z) - 1.0) < 1e-12);
  }

  auto shift = halfplane_to_disc(H("z+1"));
  CHECK(std::abs(shift.Phi(0.0) + 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(shift.w(0.0) - 2.0 / 3.0) < 1e-12);

  for (double t : {0.1, 0.5, 1.3}) {
    double E = std::exp(t);
    auto tr = halfplane_to_disc(std::polar(E, 0.0) * H("z"));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 50; ++i) {
      complex z(u(rng), u(rng));
      complex den = 1.0 + z + E * (1.0 - z);
      CHECK(std::abs(tr.w(z) - 2.0 / den) < 1e-12);
      CHECK(std::abs(tr.Phi(z) - (1.0 + z - E * (1.0 - z)) / den) < 1e-12);
    }
  }
}

TEST_CASE("transferred dilation has the norm of the half-plane operator") {
  // Ψ(z) = e^{t}z: λ = e^{−t}, so ‖C_Ψ‖ = e^{−t/2}; the inverse dilation gives e^{t/2}.
  for (double t : {0.1, 0.5}) {
    auto up = halfplane_to_disc(std::exp(t) * H("z"));
    auto down = halfplane_to_disc(std::exp(-t) * H("z"));
    double nu = spectral_norm(weighted_compose_matrix(up.w, up.Phi, 64).matrix);
    double nd = spectral_norm(weighted_compose_matrix(down.w, down.Phi, 64).matrix);
    CHECK(std::abs(nu / std::exp(-t / 2) - 1.0) < 0.02);
    CHECK(std::abs(nd / std::exp(t / 2) - 1.0) < 0.02);
    CHECK(std::abs(angular_derivative_at_infinity(std::exp(t) * H("z")).norm - std::exp(-t / 2)) < 1e-9);
  }
}

TEST_CASE("Cayley map is an involution") {
  auto M = MoebiusTransform::cayley();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  for (int i = 0; i < 100; ++i) {
    complex z(u(rng), u(rng));
    if (std::abs(z) >= 1.0) continue;
    CHECK(std::abs(M.apply(M.apply(z)) - z) < 1e-12);
  }
}
