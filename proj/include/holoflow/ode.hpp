#pragma once

// Dormand–Prince 5(4) for u' = G(u) on a complex domain, carrying the
// quadrature I' = g(u) along the same adaptive steps.

#include <algorithm>
#include <array>
#include <initializer_list>
#include <string>
#include <utility>
#include <cmath>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"

namespace holoflow {

struct ODEConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 1000000;
};

struct ODEResult {
  complex value;     // u(t)
  complex integral;  // ∫₀ᵗ g(u(s)) ds
  std::size_t steps = 0;
};

namespace detail {

inline bool inside(Domain d, complex u) {
  switch (d) {
    case Domain::disc: return std::abs(u) < 1.0 - 1e-13;
    case Domain::halfplane: return u.real() > 0.0;
    case Domain::plane: return true;
  }
  return true;
}

struct DP45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates from u(0) = z over [0, t]. Throws domain_escape if the accepted
/// trajectory leaves `dom`, step_limit past config.max_steps.
template <class Field, class Aux>
ODEResult integrate_with_aux(const Field& G, const Aux& g, complex z, double t,
                             const ODEConfig& config = {}, Domain dom = Domain::disc) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::parameter_domain, "integration time must be finite and >= 0");
  if (!(config.rtol > 0.0) || !(config.atol > 0.0))
    throw Error(ErrorCode::parameter_domain, "ODE tolerances must be positive");
  if (!detail::inside(dom, z))
    throw Error(ErrorCode::domain_escape, "initial point " + detail::fmt_complex(z) +
                                              " outside the " + to_string(dom));
  using D = detail::DP45;
  using State = std::array<complex, 2>;
  auto rhs = [&](const State& y) -> State { return {G(y[0]), g(y[0])}; };
  auto axpy = [](const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (auto& [c, k] : terms) {
      out[0] += h * c * (*k)[0];
      out[1] += h * c * (*k)[1];
    }
    return out;
  };

  State y{z, 0.0};
  ODEResult res{z, 0.0, 0};
  if (t == 0.0) return res;

  State k1 = rhs(y);
  if (!detail::finite(k1[0]) || !detail::finite(k1[1]))
    throw Error(ErrorCode::non_finite, "field not finite at " + detail::fmt_complex(z));
  double h = std::min(t, 1e-3 / std::max(1.0, std::abs(k1[0])));
  double s = 0.0;
  std::size_t steps = 0;
  while (s < t) {
    if (++steps > config.max_steps)
      throw Error(ErrorCode::step_limit, "ODE step limit reached at s = " + std::to_string(s));
    bool last = s + h >= t;
    if (last) h = t - s;
    State k2 = rhs(axpy(y, h, {{D::a21, &k1}}));
    State k3 = rhs(axpy(y, h, {{D::a31, &k1}, {D::a32, &k2}}));
    State k4 = rhs(axpy(y, h, {{D::a41, &k1}, {D::a42, &k2}, {D::a43, &k3}}));
    State k5 = rhs(axpy(y, h, {{D::a51, &k1}, {D::a52, &k2}, {D::a53, &k3}, {D::a54, &k4}}));
    State k6 = rhs(
        axpy(y, h, {{D::a61, &k1}, {D::a62, &k2}, {D::a63, &k3}, {D::a64, &k4}, {D::a65, &k5}}));
    State yn = axpy(y, h, {{D::b1, &k1}, {D::b3, &k3}, {D::b4, &k4}, {D::b5, &k5}, {D::b6, &k6}});
    State k7 = rhs(yn);

    double err = 0.0;
    bool ok = true;
    for (int c = 0; c < 2; ++c) {
      complex e = h * (D::e1 * k1[c] + D::e3 * k3[c] + D::e4 * k4[c] + D::e5 * k5[c] +
                       D::e6 * k6[c] + D::e7 * k7[c]);
      if (!detail::finite(e) || !detail::finite(yn[c])) {
        ok = false;
        break;
      }
      double sc = config.atol + config.rtol * std::max(std::abs(y[c]), std::abs(yn[c]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!ok) {
      h *= 0.25;
    } else if (err <= 1.0) {
      s = last ? t : s + h;
      y = yn;
      k1 = k7;
      if (!detail::inside(dom, y[0]))
        throw Error(ErrorCode::domain_escape,
                    "trajectory left the " + std::string(to_string(dom)) + " at s = " +
                        std::to_string(s) + ", u = " + detail::fmt_complex(y[0]));
      double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= grow;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
    if (h < 1e-15 * std::max(1.0, t))
      throw Error(ErrorCode::step_limit, "ODE step size underflow at s = " + std::to_string(s));
  }
  res.value = y[0];
  res.integral = y[1];
  res.steps = steps;
  return res;
}

template <class Field>
complex integrate_field(const Field& G, complex z, double t, const ODEConfig& config = {},
                        Domain dom = Domain::disc) {
  return integrate_with_aux(G, [](complex) { return complex(0.0); }, z, t, config, dom).value;
}

/// u′ = G(u), u(0) = z, using G's declared domain for the escape check.
inline complex integrate_semiflow(const AnalyticMap& G, complex z, double t,
                                  const ODEConfig& config = {}) {
  return integrate_field(G, z, t, config, G.domain());
}

/// Values at nondecreasing times, integrating piecewise between them.
template <class Field>
std::vector<complex> integrate_trajectory(const Field& G, complex z, const std::vector<double>& times,
                                          const ODEConfig& config = {}, Domain dom = Domain::disc) {
  std::vector<complex> out;
  out.reserve(times.size());
  double prev = 0.0;
  complex u = z;
  for (double t : times) {
    if (t < prev) throw Error(ErrorCode::parameter_domain, "trajectory times must be nondecreasing");
    u = integrate_field(G, u, t - prev, config, dom);
    out.push_back(u);
    prev = t;
  }
  return out;
}

}  // namespace holoflow
