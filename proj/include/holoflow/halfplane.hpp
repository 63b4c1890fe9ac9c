#pragma once

// Composition operators on the right half-plane: angular derivative at ∞,
// generator tests, and the Cayley transfer to weighted operators on the disc.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/moebius.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/radial.hpp"

namespace holoflow {

namespace detail {

inline const std::array<double, 3>& ray_angles() {
  static const std::array<double, 3> a{0.0, std::numbers::pi / 4, -std::numbers::pi / 4};
  return a;
}

struct RayLimit {
  complex value{};
  bool divergent = false;
  std::vector<complex> samples;
};

/// lim f(x e^{iθ}) over x = 2^k, k = 4..20, by three-point Richardson in
/// the variable 1/x.
template <class F>
RayLimit ray_limit(const F& f, double theta) {
  RayLimit out;
  std::vector<double> mags;
  for (int k = 4; k <= 20; ++k) {
    complex z = std::polar(std::ldexp(1.0, k), theta);
    complex v = f(z);
    out.samples.push_back(v);
    mags.push_back(std::abs(v));
  }
  if (!finite(out.samples.back()) || (mags.back() > 1e6 && looks_divergent(mags))) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  std::size_t n = out.samples.size();
  complex v0 = out.samples[n - 3], v1 = out.samples[n - 2], v2 = out.samples[n - 1];
  out.value = {richardson3(v0.real(), v1.real(), v2.real()), richardson3(v0.imag(), v1.imag(), v2.imag())};
  return out;
}

inline std::vector<complex> halfplane_spot_grid() {
  std::vector<complex> pts;
  for (double x : {0.01, 0.1, 1.0, 10.0, 100.0})
    for (double y : {0.0, 0.1, -0.1, 1.0, -1.0, 10.0, -10.0, 100.0, -100.0}) pts.emplace_back(x, y);
  return pts;
}

template <class F>
void require_halfplane_self_map(const F& psi) {
  for (complex z : halfplane_spot_grid()) {
    complex w = psi(z);
    if (!(w.real() > -1e-12))
      throw Error(ErrorCode::not_self_map, "Psi(" + fmt_complex(z) + ") = " + fmt_complex(w) +
                                               " leaves the right half-plane");
  }
}

/// 25 log-spaced points in [lo, hi].
inline std::vector<double> log_points(double lo, double hi, int n = 25) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

}  // namespace detail

struct AngularDerivativeReport {
  double lambda = 0.0;  // +inf when unbounded above
  bool bounded = false;
  bool determined = true;  // rays agree within 1e−3
  double norm = 0.0;       // √λ when bounded
  std::array<complex, 3> rays{};
};

/// λ = lim z/Ψ(z) along arg z ∈ {0, ±π/4}. The self-map spot check can be
/// switched off to read the limit of maps such as z² that leave ℂ₊.
template <class F>
AngularDerivativeReport angular_derivative_at_infinity(const F& psi, bool check_self_map = true) {
  if (check_self_map) detail::require_halfplane_self_map(psi);
  AngularDerivativeReport rep;
  bool divergent = false;
  for (std::size_t i = 0; i < 3; ++i) {
    auto lim = detail::ray_limit([&](complex z) { return z / psi(z); }, detail::ray_angles()[i]);
    rep.rays[i] = lim.value;
    divergent = divergent || lim.divergent;
  }
  if (divergent) {
    rep.lambda = std::numeric_limits<double>::infinity();
    return rep;
  }
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(rep.rays[i] - rep.rays[0]) > 1e-3 * std::max(1.0, std::abs(rep.rays[0]))) rep.determined = false;
  rep.lambda = rep.rays[0].real();
  if (std::abs(rep.rays[0].imag()) > 1e-3 * std::max(1.0, std::abs(rep.lambda))) rep.determined = false;
  if (std::abs(rep.lambda) < 1e-6) rep.lambda = 0.0;
  rep.bounded = rep.determined && rep.lambda > 0.0;
  rep.norm = rep.bounded ? std::sqrt(rep.lambda) : 0.0;
  return rep;
}

inline AngularDerivativeReport angular_derivative_at_infinity(const AnalyticMap& psi, bool check_self_map = true) {
  return angular_derivative_at_infinity([&](complex z) { return psi(z); }, check_self_map);
}

struct HalfplaneGeneratorReport {
  bool pass = false;
  double max_violation = -std::numeric_limits<double>::infinity();  // x ∂ReG/∂x − ReG, scaled
  complex worst_point{};
  std::vector<complex> overflow_points;
};

/// x ∂(Re G)/∂x ≤ Re G on x ∈ [1e−3, 1e3] (log), y ∈ {0, ±[1e−3, 1e3]} (log).
inline HalfplaneGeneratorReport halfplane_generator_check(const AnalyticMap& G) {
  HalfplaneGeneratorReport rep;
  auto xs = detail::log_points(1e-3, 1e3);
  std::vector<double> ys{0.0};
  for (double y : detail::log_points(1e-3, 1e3)) {
    ys.push_back(y);
    ys.push_back(-y);
  }
  std::vector<complex> pts;
  for (double x : xs)
    for (double y : ys) pts.emplace_back(x, y);
  std::vector<double> excess(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    complex z = pts[i];
    double x = z.real();
    double h = 1e-4 * std::max(1.0, x);
    complex gp = G(z + h), gm = G(z - h), g0 = G(z);
    if (!detail::finite(gp) || !detail::finite(gm) || !detail::finite(g0)) {
      excess[i] = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    double dre = (gp.real() - gm.real()) / (2.0 * h);
    // Violation in units of the tolerance 1e−6(1 + |Re G|).
    excess[i] = (x * dre - g0.real()) / (1.0 + std::abs(g0.real()));
  });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::isnan(excess[i])) {
      rep.overflow_points.push_back(pts[i]);
      continue;
    }
    if (excess[i] > rep.max_violation) {
      rep.max_violation = excess[i];
      rep.worst_point = pts[i];
    }
  }
  rep.pass = rep.max_violation <= 1e-6;
  return rep;
}

struct ArvanitidisReport {
  double delta = 0.0;
  bool determined = true;
  bool quasicontractive = false;
  std::array<complex, 3> rays{};

  /// ‖C_{φ_t}‖ = e^{−δt/2}.
  double norm_at(double t) const { return std::exp(-delta * t / 2.0); }
};

/// δ = ∠lim G(z)/z along three rays.
inline ArvanitidisReport arvanitidis_delta(const AnalyticMap& G) {
  ArvanitidisReport rep;
  bool divergent = false;
  for (std::size_t i = 0; i < 3; ++i) {
    auto lim = detail::ray_limit([&](complex z) { return G(z) / z; }, detail::ray_angles()[i]);
    rep.rays[i] = lim.value;
    divergent = divergent || lim.divergent;
  }
  if (divergent) {
    rep.determined = false;
    rep.delta = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(rep.rays[i] - rep.rays[0]) > 1e-3 * std::max(1.0, std::abs(rep.rays[0]))) rep.determined = false;
  if (std::abs(rep.rays[0].imag()) > 1e-3 * std::max(1.0, std::abs(rep.rays[0]))) rep.determined = false;
  rep.delta = rep.rays[0].real();
  if (std::abs(rep.delta) < 1e-9) rep.delta = 0.0;
  rep.quasicontractive = rep.determined;
  return rep;
}

struct QuasicontractiveReport {
  double inf_estimate = 0.0;  // −inf when flagged divergent
  bool divergent = false;
  bool necessary_ok = false;  // inf > −∞
  bool contractive_candidate = false;  // inf ≥ 0
  std::vector<double> grid_minima;
  complex argmin{};
};

/// inf Re G / Re z over log grids enlarged ×100 per step (four grids).
/// Divergent iff each enlargement drops a negative minimum by more than ×10.
inline QuasicontractiveReport quasicontractive_necessary(const AnalyticMap& G) {
  QuasicontractiveReport rep;
  complex last_arg{};
  for (int m = 0; m < 4; ++m) {
    double lo = 1e-3 * std::pow(100.0, -m), hi = 1e3 * std::pow(100.0, m);
    int n = 25 + 8 * m;
    auto xs = detail::log_points(lo, hi, n);
    std::vector<double> ys{0.0};
    for (double y : detail::log_points(lo, hi, n)) {
      ys.push_back(y);
      ys.push_back(-y);
    }
    double best = std::numeric_limits<double>::infinity();
    for (double x : xs)
      for (double y : ys) {
        complex z(x, y);
        complex g = G(z);
        if (!detail::finite(g)) continue;
        double v = g.real() / x;
        if (v < best) {
          best = v;
          last_arg = z;
        }
      }
    rep.grid_minima.push_back(best);
  }
  rep.argmin = last_arg;
  const auto& mins = rep.grid_minima;
  rep.divergent = true;
  for (std::size_t i = 1; i < mins.size(); ++i)
    if (!(mins[i] < 0.0 && mins[i] < 10.0 * mins[i - 1])) rep.divergent = false;
  if (!(mins[0] < 0.0)) rep.divergent = false;
  rep.inf_estimate = rep.divergent ? -std::numeric_limits<double>::infinity() : mins.back();
  rep.necessary_ok = !rep.divergent;
  rep.contractive_candidate = !rep.divergent && rep.inf_estimate >= -1e-9;
  return rep;
}

struct HalfplaneTransfer {
  AnalyticMap Phi;  // M∘Ψ∘M on the disc
  AnalyticMap w;    // (1 + Φ(z))/(1 + z)
};

/// C_Ψ on H²(ℂ₊) corresponds to f ↦ w·(f∘Φ) on H²(𝔻).
inline HalfplaneTransfer halfplane_to_disc(const AnalyticMap& psi) {
  detail::require_halfplane_self_map(psi);
  AnalyticMap M = MoebiusTransform::cayley().to_map();
  AnalyticMap Phi = compose(M, compose(psi.with_domain(Domain::disc), M));
  for (complex z : {complex(0.0), complex(0.5), complex(-0.5), complex(0.0, 0.5), complex(0.0, -0.5),
                    complex(0.9, 0.1), complex(-0.9, -0.1), complex(0.3, -0.8)}) {
    complex v = Phi(z);
    if (!(std::abs(v) <= 1.0 + 1e-12))
      throw Error(ErrorCode::not_self_map, "transferred map leaves the disc at " + detail::fmt_complex(z));
  }
  AnalyticMap z = AnalyticMap::identity();
  return {Phi, (1.0 + Phi) / (1.0 + z)};
}

}  // namespace holoflow
