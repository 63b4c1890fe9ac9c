#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "holoflow/operator.hpp"
#include "holoflow/semiflow.hpp"

using namespace holoflow;

namespace {
const complex I(0.0, 1.0);

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }
}  // namespace

TEST_CASE("weighted_compose_matrix examples") {
  auto T = weighted_compose_matrix(std::nullopt, AnalyticMap::parse("0.5*z"), 16);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) CHECK(std::abs(T.matrix(m, n) - (m == n ? std::pow(0.5, n) : 0.0)) < 1e-14);
  auto S = weighted_compose_matrix(std::nullopt, AnalyticMap::parse("z^2"), 16);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) CHECK(std::abs(S.matrix(m, n) - (m == 2 * n ? 1.0 : 0.0)) < 1e-14);
  auto B = weighted_compose_matrix(AnalyticMap::parse("1+z"), AnalyticMap::identity(), 16);
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) CHECK(std::abs(B.matrix(m, n) - ((m == n || m == n + 1) ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("sampled path matches binomial oracle") {
  // φ = (1+z)/4 through exp(0)*… to force the sampled path; entry (m,n) = C(n,m)/4ⁿ.
  auto phi = AnalyticMap::parse("exp(0*z)*(1+z)/4");
  REQUIRE_FALSE(phi.polynomial(8).has_value());
  auto T = weighted_compose_matrix(std::nullopt, phi, 24);
  for (int m = 0; m < 24; ++m)
    for (int n = 0; n < 24; ++n) {
      double expect = m <= n ? binom(n, m) / std::pow(4.0, n) : 0.0;
      CHECK(std::abs(T.matrix(m, n) - expect) < 1e-10);
    }
}

TEST_CASE("column decay for small symbols") {
  auto T = weighted_compose_matrix(std::nullopt, AnalyticMap::parse("exp(z)/(2*exp(1)+0*z)"), 32);
  // ‖φ‖∞ ≤ 1/2: |entries of column n| ≤ (1/2)ⁿ up to rounding.
  for (int n = 0; n < 32; ++n) CHECK(T.matrix.col(n).cwiseAbs().maxCoeff() <= std::pow(0.5, n) + 1e-10);
}

TEST_CASE("matrix functoriality") {
  auto phi = AnalyticMap::parse("0.5*exp(z-1)");
  auto psi = AnalyticMap::parse("(z+z^2)/4+0.1i");
  std::vector<double> errs;
  for (std::size_t N : {16, 32, 64}) {
    auto lhs = weighted_compose_matrix(std::nullopt, compose(phi, psi), N);
    Eigen::MatrixXcd rhs = weighted_compose_matrix(std::nullopt, psi, N).matrix * weighted_compose_matrix(std::nullopt, phi, N).matrix;
    errs.push_back((lhs.matrix - rhs).norm());
  }
  INFO("errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(errs[2] < 1e-9);
  CHECK((errs[0] >= 4.0 * errs[1] || errs[0] < 1e-12));
  CHECK((errs[1] >= 4.0 * errs[2] || errs[1] < 1e-12));
}

TEST_CASE("generator_matrix examples") {
  auto A = generator_matrix(AnalyticMap::parse("-z"), AnalyticMap::parse("0"), 10);
  for (int m = 0; m < 10; ++m)
    for (int n = 0; n < 10; ++n) CHECK(A.matrix(m, n) == (m == n ? complex(-n) : complex(0.0)));
  auto Id = generator_matrix(AnalyticMap::parse("0"), AnalyticMap::parse("1"), 10);
  CHECK((Id.matrix - Eigen::MatrixXcd::Identity(10, 10)).norm() == 0.0);
  // n(1 − z)² z^{n−1} = n z^{n−1} − 2n zⁿ + n z^{n+1}.
  auto P = generator_matrix(AnalyticMap::parse("(1-z)^2"), AnalyticMap::parse("0"), 12);
  for (int m = 0; m < 12; ++m)
    for (int n = 0; n < 12; ++n) {
      double e = 0.0;
      if (n > 0 && m == n - 1) e = n;
      if (m == n) e = -2.0 * n;
      if (m == n + 1) e = n;
      CHECK(std::abs(P.matrix(m, n) - e) < 1e-14);
    }
  // Sampled path agrees with the exact one.
  auto Q = generator_matrix(AnalyticMap::parse("exp(0*z)*(1-z)^2"), AnalyticMap::parse("0"), 12);
  CHECK((Q.matrix - P.matrix).norm() < 1e-8);
}

TEST_CASE("power_limit examples") {
  auto half = power_limit(weighted_compose_matrix(std::nullopt, AnalyticMap::parse("z/2"), 16));
  CHECK(half.mode == PowerMode::converged);
  CHECK(half.rank == 1);
  REQUIRE(half.evaluation_point.has_value());
  CHECK(std::abs(*half.evaluation_point) < 1e-9);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(16, 16);
  P(0, 0) = 1.0;
  CHECK((half.limit - P).norm() < 1e-8);

  auto rot = power_limit(weighted_compose_matrix(std::nullopt, AnalyticMap::parse("1i*z"), 8));
  CHECK(rot.mode == PowerMode::oscillating);

  auto hyp_symbol = AnalyticMap::parse("(z+0.5)/(1+0.5*z)");
  auto hyp = power_limit(weighted_compose_matrix(std::nullopt, hyp_symbol, 48));
  CHECK(hyp.mode == PowerMode::divergent);
  CHECK(hyp.unbounded_limit);
  REQUIRE(hyp.evaluation_point.has_value());
  CHECK(std::abs(*hyp.evaluation_point - 1.0) < 0.05);
  // Truncated limits approximate δ₁, whose norm on span{zⁿ : n < N} is √N.
  auto small = power_limit(weighted_compose_matrix(std::nullopt, hyp_symbol, 12));
  auto big = power_limit(weighted_compose_matrix(std::nullopt, hyp_symbol, 96));
  CHECK(big.limit.norm() / small.limit.norm() > 0.8 * std::sqrt(8.0));
}

TEST_CASE("power_limit locates an interior evaluation point") {
  // φ(z) = (z + 1)/4 has fixed point 1/3; Cφⁿ → f ↦ f(1/3).
  auto rep = power_limit(weighted_compose_matrix(std::nullopt, AnalyticMap::parse("(z+1)/4"), 24));
  REQUIRE(rep.mode == PowerMode::converged);
  REQUIRE(rep.evaluation_point.has_value());
  CHECK(std::abs(*rep.evaluation_point - 1.0 / 3.0) < 1e-8);
}

TEST_CASE("c0_probe examples") {
  auto rep = c0_probe([](double t, complex z) { return std::exp(-t) * z; }, 32);
  CHECK(rep.pass);
  CHECK(rep.bounded);
  CHECK(rep.monotone);
  // Defect oracle: max_n |e^{−nt} − 1| = 1 − e^{−31t}.
  for (std::size_t j = 0; j < rep.times.size(); ++j)
    CHECK(std::abs(rep.defects[j] - (1.0 - std::exp(-31.0 * rep.times[j]))) < 1e-9);
  auto zero = c0_probe([](double, complex z) { return z; }, 16);
  CHECK(zero.final_defect < 1e-12);
  auto rot = c0_probe([](double t, complex z) { return std::exp(I * 2.0 * t) * z; }, 32);
  CHECK(rot.pass);
  CHECK(std::abs(rot.sup_norm - 1.0) < 1e-9);
}

TEST_CASE("dissipativity examples") {
  auto A = generator_matrix(AnalyticMap::parse("-z"), AnalyticMap::parse("0"), 16);
  auto d = dissipativity_probe(A);
  CHECK(std::abs(d.omega) < 1e-12);
  CHECK(d.contractive);
  A.matrix += 2.0 * Eigen::MatrixXcd::Identity(16, 16);
  CHECK(std::abs(dissipativity_probe(A).omega - 2.0) < 1e-12);
  auto tr = dissipativity_trend(AnalyticMap::parse("(1-z)^2"), AnalyticMap::parse("0"));
  REQUIRE(tr.omegas.size() == 3);
  // Oracle: Re⟨Az, z⟩ is bounded above on truncations by the tridiagonal structure;
  // the estimate must not grow with N.
  CHECK(tr.omegas[2] <= tr.omegas[0] + 1.0);
  for (double w : tr.omegas) CHECK(std::isfinite(w));
}

TEST_CASE("elliptic flow generators are dissipative at every N") {
  for (double w : {1.0, -2.5}) {
    auto G = FlowSpec::elliptic(0.0, w).generator();
    for (std::size_t N : {8, 16, 32, 64}) CHECK(dissipativity_probe(generator_matrix(G, AnalyticMap::parse("0"), N)).omega <= 1e-9);
  }
}

TEST_CASE("weighted_cocycle examples and identity") {
  auto G = AnalyticMap::parse("-z");
  CHECK(std::abs(weighted_cocycle(G, AnalyticMap::parse("0"), 1.0, 0.3) - 1.0) < 1e-15);
  CHECK(std::abs(weighted_cocycle(G, AnalyticMap::parse("0.7"), 2.0, 0.3) - std::exp(1.4)) < 1e-10);
  for (double t : {0.5, 1.5}) {
    complex z(0.2, 0.6);
    CHECK(std::abs(weighted_cocycle(G, AnalyticMap::parse("z"), t, z) - std::exp(z * (1.0 - std::exp(-t)))) < 1e-10);
  }
  auto P = AnalyticMap::parse("(1-z)^2");
  auto g = AnalyticMap::parse("z^2-0.5i");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    complex z = std::polar(0.9 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    double s = u(rng), t = u(rng);
    complex lhs = weighted_cocycle(P, g, t + s, z);
    complex rhs = weighted_cocycle(P, g, t, z) * weighted_cocycle(P, g, s, integrate_semiflow(P, z, t));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Gram test for inner symbols fixing 0") {
  for (const char* text : {"z^2", "z*(z-0.2)/(1-0.2*z)"}) {
    auto T = weighted_compose_matrix(std::nullopt, AnalyticMap::parse(text), 64);
    Eigen::MatrixXcd C = T.matrix.leftCols(16);
    CHECK((C.adjoint() * C - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  }
}
