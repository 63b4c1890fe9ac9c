#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/moebius.hpp"
#include "holoflow/ode.hpp"

namespace holoflow {

enum class FlowVariant { elliptic, hyperbolic, parabolic };

inline const char* to_string(FlowVariant v) {
  switch (v) {
    case FlowVariant::elliptic: return "elliptic";
    case FlowVariant::hyperbolic: return "hyperbolic";
    case FlowVariant::parabolic: return "parabolic";
  }
  return "elliptic";
}

/// One of the three continuous flows of disc automorphisms.
///   elliptic:   alpha ∈ 𝔻, w ≠ 0        (fixes alpha, φ′_t(alpha) = e^{−iwt})
///   hyperbolic: alpha, alpha2 ∈ 𝕋, c > 0 (attracting alpha, repelling alpha2)
///   parabolic:  alpha ∈ 𝕋, w ≠ 0
struct FlowSpec {
  FlowVariant variant = FlowVariant::elliptic;
  complex alpha{};
  complex alpha2{};
  double w = 0.0;
  double c = 0.0;

  static FlowSpec elliptic(complex alpha, double w) {
    FlowSpec s{FlowVariant::elliptic, alpha, {}, w, 0.0};
    s.validate();
    return s;
  }
  static FlowSpec hyperbolic(complex alpha1, complex alpha2, double c) {
    FlowSpec s{FlowVariant::hyperbolic, alpha1, alpha2, 0.0, c};
    s.validate();
    return s;
  }
  static FlowSpec parabolic(complex alpha, double w) {
    FlowSpec s{FlowVariant::parabolic, alpha, {}, w, 0.0};
    s.validate();
    return s;
  }

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::parameter_domain, m); };
    auto unimodular = [](complex a) { return std::abs(std::abs(a) - 1.0) <= 1e-12; };
    switch (variant) {
      case FlowVariant::elliptic:
        if (!(std::abs(alpha) < 1.0)) bad("elliptic flow needs |alpha| < 1");
        if (!(w != 0.0) || !std::isfinite(w)) bad("elliptic flow needs real w != 0");
        break;
      case FlowVariant::hyperbolic:
        if (!unimodular(alpha) || !unimodular(alpha2)) bad("hyperbolic flow needs |alpha1| = |alpha2| = 1");
        if (std::abs(alpha - alpha2) <= 1e-12) bad("hyperbolic flow needs alpha1 != alpha2");
        if (!(c > 0.0) || !std::isfinite(c)) bad("hyperbolic flow needs c > 0");
        break;
      case FlowVariant::parabolic:
        if (!unimodular(alpha)) bad("parabolic flow needs |alpha| = 1");
        if (!(w != 0.0) || !std::isfinite(w)) bad("parabolic flow needs real w != 0");
        break;
    }
  }

  /// φ_t as a Möbius transform.
  MoebiusTransform at(double t) const {
    if (!(t >= 0.0)) throw Error(ErrorCode::parameter_domain, "flow time must be >= 0");
    const complex I(0.0, 1.0);
    switch (variant) {
      case FlowVariant::elliptic: {
        complex e = std::exp(-I * w * t);
        double a2 = std::norm(alpha);
        return {e - a2, alpha * (1.0 - e), std::conj(alpha) * (e - 1.0), 1.0 - a2 * e};
      }
      case FlowVariant::hyperbolic: {
        double e = std::exp(c * t);
        return {alpha2 - alpha * e, alpha * alpha2 * (e - 1.0), 1.0 - e, alpha2 * e - alpha};
      }
      case FlowVariant::parabolic: {
        complex iwt = I * w * t;
        return {1.0 - iwt, iwt * alpha, -iwt * std::conj(alpha), 1.0 + iwt};
      }
    }
    return MoebiusTransform::identity();
  }

  /// Infinitesimal generator, d/dt φ_t at t = 0.
  AnalyticMap generator() const {
    const complex I(0.0, 1.0);
    AnalyticMap z;
    switch (variant) {
      case FlowVariant::elliptic:
        return (-I * w / (1.0 - std::norm(alpha))) * ((z - alpha) * (1.0 - std::conj(alpha) * z));
      case FlowVariant::hyperbolic:
        return (c / (alpha2 - alpha)) * ((alpha2 - z) * (alpha - z));
      case FlowVariant::parabolic:
        return (I * w * std::conj(alpha)) * pow(z - alpha, 2);
    }
    return z;
  }

  /// Point the Denjoy–Wolff iteration should find (the fixed point for
  /// elliptic flows).
  complex attracting_point() const { return alpha; }
};

inline complex make_flow(const FlowSpec& spec, double t, complex z) {
  spec.validate();
  return spec.at(t).apply(z);
}

enum class ModelMode { interior, boundary };

/// φ_t = h⁻¹(e^{−ct} h) (interior, h(0) = 0) or h⁻¹(h + it) (boundary).
struct SemiflowModel {
  AnalyticMap h;
  ModelMode mode = ModelMode::interior;
  complex c = 1.0;
  int max_iterations = 50;
  double tol = 1e-12;

  void validate() const {
    if (mode == ModelMode::interior) {
      if (c.real() < 0.0) throw Error(ErrorCode::parameter_domain, "interior model needs Re c >= 0");
      if (std::abs(h(0.0)) > 1e-12)
        throw Error(ErrorCode::parameter_domain, "interior model needs h(0) = 0");
    }
  }
};

namespace detail {

/// Newton for h(u) = target from `seed`; true on convergence inside the disc.
inline bool newton_invert(const AnalyticMap& h, complex target, complex seed, int max_iter, double tol,
                          complex& out) {
  complex u = seed;
  for (int it = 0; it < max_iter; ++it) {
    Jet j = h.jet(u);
    complex f = j.value - target;
    if (!finite(f) || !finite(j.derivative) || std::abs(j.derivative) == 0.0) return false;
    complex step = f / j.derivative;
    // Damp steps that would leave the disc.
    double lambda = 1.0;
    while (std::abs(u - lambda * step) >= 1.0 && lambda > 1e-6) lambda *= 0.5;
    u -= lambda * step;
    if (std::abs(lambda * step) <= tol * std::max(1.0, std::abs(u))) {
      out = u;
      return true;
    }
  }
  out = u;
  return std::abs(h(u) - target) < 1e-10;
}

}  // namespace detail

inline complex model_semiflow(const SemiflowModel& model, double t, complex z) {
  model.validate();
  if (!(t >= 0.0)) throw Error(ErrorCode::parameter_domain, "flow time must be >= 0");
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::parameter_domain, "z must lie in the open disc");
  if (t == 0.0) return z;
  complex hz = model.h(z);
  complex target = model.mode == ModelMode::interior ? std::exp(-model.c * t) * hz
                                                     : hz + complex(0.0, t);
  auto accept = [&](complex u) {
    return std::abs(u) < 1.0 && std::abs(model.h(u) - target) < 1e-10;
  };
  complex u;
  if (detail::newton_invert(model.h, target, z, model.max_iterations, model.tol, u) && accept(u))
    return u;
  double rho = std::abs(z) > 1e-3 ? std::abs(z) : 0.5;
  for (int k = 0; k < 16; ++k) {
    complex seed = std::polar(rho, 2.0 * std::numbers::pi * k / 16.0);
    if (detail::newton_invert(model.h, target, seed, model.max_iterations, model.tol, u) && accept(u))
      return u;
  }
  if (std::abs(u) >= 1.0)
    throw Error(ErrorCode::domain_escape, "model inversion left the disc at t = " + std::to_string(t));
  throw Error(ErrorCode::inversion_failure, "Newton inversion of h stalled for target " +
                                                detail::fmt_complex(target));
}

struct GeneratorEstimate {
  complex value;
  double stage_gap = 0.0;           // |second-level − first-level| Richardson
  complex derivative_at_small_t{};  // φ′_h(z) at the smallest step
  bool continuity_ok = false;       // |φ′_h(z) − 1| small
};

/// Richardson-extrapolated (φ_h(z) − z)/h over h ∈ {1e−3, 5e−4, 2.5e−4}.
template <class Flow>
GeneratorEstimate generator_of(const Flow& flow, complex z) {
  const double h0 = 1e-3;
  complex q[3];
  for (int j = 0; j < 3; ++j) {
    double h = h0 / (1 << j);
    q[j] = (flow(h, z) - z) / h;
  }
  complex r0 = 2.0 * q[1] - q[0];
  complex r1 = 2.0 * q[2] - q[1];
  complex r2 = (4.0 * r1 - r0) / 3.0;
  GeneratorEstimate out;
  out.value = r2;
  out.stage_gap = std::abs(r2 - r1);
  if (!std::isfinite(out.stage_gap) || out.stage_gap > 1e-5 * std::max(1.0, std::abs(r2)))
    throw Error(ErrorCode::non_convergence,
                "difference quotients disagree by " + std::to_string(out.stage_gap) + " at z = " +
                    detail::fmt_complex(z));
  double eps = 1e-4 * std::min(1.0, std::max(1e-3, 1.0 - std::abs(z)));
  double hs = h0 / 4;
  out.derivative_at_small_t = (flow(hs, z + eps) - flow(hs, z - eps)) / (2.0 * eps);
  out.continuity_ok = std::abs(out.derivative_at_small_t - 1.0) < 1e-2;
  return out;
}

/// Time-parameterized map backed by the ODE solver, for generator_of.
inline auto ode_flow(AnalyticMap G, ODEConfig config = {}) {
  return [G = std::move(G), config](double t, complex z) { return integrate_semiflow(G, z, t, config); };
}

}  // namespace holoflow
