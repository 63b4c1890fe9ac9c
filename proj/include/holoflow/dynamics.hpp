#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/moebius.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/radial.hpp"

namespace holoflow {

enum class DWKind { interior, boundary, elliptic_automorphism };

inline const char* to_string(DWKind k) {
  switch (k) {
    case DWKind::interior: return "interior";
    case DWKind::boundary: return "boundary";
    case DWKind::elliptic_automorphism: return "elliptic_automorphism";
  }
  return "interior";
}

struct DWReport {
  complex point{};
  DWKind kind = DWKind::interior;
  complex multiplier{};       // φ′(α); for boundary points the angular derivative estimate
  std::size_t iterations = 0;  // 0 when resolved from an exact Möbius fit
  std::string method;          // "moebius" or "iteration"
};

namespace detail {

inline std::vector<complex> disc_sample_grid() {
  std::vector<complex> pts{0.0};
  for (double r : {0.25, 0.5, 0.75, 0.9, 0.99})
    for (int j = 0; j < 32; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * (j + 0.5) / 32));
  return pts;
}

inline void require_self_map(const AnalyticMap& phi) {
  for (complex z : disc_sample_grid()) {
    complex w = phi(z);
    if (!(std::abs(w) <= 1.0 + 1e-12))
      throw Error(ErrorCode::not_self_map, "phi(" + fmt_complex(z) + ") = " + fmt_complex(w) +
                                               " lies outside the disc");
  }
}

/// The Möbius transform agreeing with φ on the sample grid, if any.
inline std::optional<MoebiusTransform> moebius_fit(const AnalyticMap& phi) {
  const complex z1 = 0.0, z2 = 0.5, z3 = complex(0.0, 0.5);
  complex w1 = phi(z1), w2 = phi(z2), w3 = phi(z3);
  if (std::abs(w1 - w2) < 1e-12 || std::abs(w1 - w3) < 1e-12 || std::abs(w2 - w3) < 1e-12)
    return std::nullopt;
  try {
    MoebiusTransform m = mobius_through(z1, z2, z3, w1, w2, w3);
    for (complex z : disc_sample_grid()) {
      complex d = m.c() * z + m.d();
      if (std::abs(d) < 1e-12) return std::nullopt;
      if (std::abs(m.apply(z) - phi(z)) > 1e-10) return std::nullopt;
    }
    return m;
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline DWReport dw_from_moebius(const MoebiusTransform& m) {
  DWReport rep;
  rep.method = "moebius";
  auto fps = m.fixed_points();
  // Identity: every point is fixed; report the origin.
  if (std::abs(m.c()) < 1e-14 && std::abs(m.b()) < 1e-14 && std::abs(m.a() - m.d()) < 1e-14) {
    rep.point = 0.0;
    rep.multiplier = 1.0;
    rep.kind = DWKind::elliptic_automorphism;
    return rep;
  }
  bool automorphism = m.is_disc_automorphism();
  // A double root (parabolic case) is only resolved to ~sqrt(eps) per root;
  // the mean cancels the leading error.
  if (std::abs(fps[0] - fps[1]) < 1e-6) {
    complex mid = 0.5 * (fps[0] + fps[1]);
    if (std::abs(std::abs(mid) - 1.0) < 1e-6) mid /= std::abs(mid);
    fps = {mid, mid};
  }
  for (complex p : fps) {
    if (std::abs(p) < 1.0 - 1e-9) {
      rep.point = p;
      rep.multiplier = m.derivative(p);
      rep.kind = automorphism && std::abs(std::abs(rep.multiplier) - 1.0) < 1e-9
                     ? DWKind::elliptic_automorphism
                     : DWKind::interior;
      return rep;
    }
  }
  // No interior fixed point: the attracting boundary one has |φ′| ≤ 1.
  double best = std::numeric_limits<double>::infinity();
  for (complex p : fps) {
    if (std::abs(std::abs(p) - 1.0) > 1e-7) continue;
    double d = std::abs(m.derivative(p));
    if (d < best) {
      best = d;
      rep.point = p / std::abs(p);
      rep.multiplier = m.derivative(p);
    }
  }
  if (!std::isfinite(best) || best > 1.0 + 1e-9)
    throw Error(ErrorCode::non_convergence, "no attracting fixed point in the closed disc");
  rep.kind = DWKind::boundary;
  return rep;
}

inline complex newton_fixed_point(const AnalyticMap& phi, complex z) {
  for (int it = 0; it < 50; ++it) {
    Jet j = phi.jet(z);
    complex f = j.value - z, df = j.derivative - 1.0;
    if (std::abs(df) < 1e-14) break;
    complex step = f / df;
    z -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return z;
}

inline double arg_spread(const std::deque<complex>& tail) {
  double ref = std::arg(tail.back());
  double spread = 0.0;
  for (complex w : tail) {
    double d = std::remainder(std::arg(w) - ref, 2.0 * std::numbers::pi);
    spread = std::max(spread, std::abs(d));
  }
  return spread;
}

}  // namespace detail

/// Denjoy–Wolff point of a self-map. Möbius symbols are resolved exactly from
/// their fixed points; other symbols by iteration from {0, 0.3, −0.3, 0.5i}.
inline DWReport denjoy_wolff(const AnalyticMap& phi, std::size_t max_iterations = 100000) {
  detail::require_self_map(phi);
  if (auto m = detail::moebius_fit(phi)) return detail::dw_from_moebius(*m);

  const complex starts[] = {0.0, 0.3, -0.3, complex(0.0, 0.5)};
  std::string tail_text;
  for (complex z0 : starts) {
    complex z = z0;
    std::deque<complex> tail;
    for (std::size_t n = 1; n <= max_iterations; ++n) {
      complex next = phi(z);
      if (!detail::finite(next)) break;
      tail.push_back(next);
      if (tail.size() > 100) tail.pop_front();
      if (std::abs(next - z) < 1e-9 && std::abs(next) < 1.0 - 1e-6) {
        // Slow drift toward a boundary point also has tiny steps; accept only
        // a genuine attracting fixed point.
        complex p = detail::newton_fixed_point(phi, next);
        if (std::abs(p) < 1.0 - 1e-6 && std::abs(phi(p) - p) < 1e-12 &&
            std::abs(phi.derivative(p)) < 1.0 - 1e-9) {
          DWReport rep;
          rep.method = "iteration";
          rep.point = p;
          rep.multiplier = phi.derivative(p);
          rep.kind = DWKind::interior;
          rep.iterations = n;
          return rep;
        }
      }
      bool near_boundary = std::abs(next) > 1.0 - 1e-6;
      bool stable = tail.size() == 100 && detail::arg_spread(tail) < 1e-4;
      // Slow (parabolic) approach: modulus still increasing at the cap.
      bool at_cap = n == max_iterations && tail.size() == 100 &&
                    std::abs(tail.back()) > std::abs(tail.front()) && detail::arg_spread(tail) < 1e-3;
      if ((near_boundary && stable) || at_cap) {
        DWReport rep;
        rep.method = "iteration";
        rep.point = next / std::abs(next);
        rep.kind = DWKind::boundary;
        rep.iterations = n;
        // Angular derivative estimate (1 − |φ(rα)|)/(1 − r).
        double r = 1.0 - 1e-6;
        rep.multiplier = (1.0 - std::abs(phi(r * rep.point))) / (1.0 - r);
        return rep;
      }
      z = next;
    }
    tail_text.clear();
    for (complex w : tail) tail_text += " " + detail::fmt_complex(w);
  }
  throw Error(ErrorCode::non_convergence, "Denjoy-Wolff iteration did not settle; tail:" +
                                              tail_text.substr(0, 400));
}

struct InnerProbeReport {
  double defect = 0.0;  // extrapolated lim mean(1 − |φ|²)
  bool inner = false;
  bool heuristic = true;
  std::vector<double> samples;
};

/// Mean of 1 − |φ(re^{iθ})|² over 512 angles, r = 1 − 2^{−k}, k = 4..12.
inline InnerProbeReport inner_probe(const AnalyticMap& phi) {
  InnerProbeReport rep;
  const int n = 512;
  RadialLimit lim = radial_limit(
      [&](double r) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += 1.0 - std::norm(phi(std::polar(r, 2.0 * std::numbers::pi * j / n)));
        return acc / n;
      },
      4, 12);
  rep.samples = lim.samples;
  rep.defect = lim.divergent ? lim.samples.back() : lim.value;
  rep.inner = std::abs(rep.defect) < 1e-3;
  return rep;
}

struct TauReport {
  double estimate = 0.0;
  complex argmax{};
  int angles = 0;
  int radii = 0;
};

/// sup (1−|z|²)/(1−|φ(z)|²)·|φ′(z)| over angles × radii r_j = 0.995·j/(radii−1).
inline TauReport tau_phi_infty(const AnalyticMap& phi, int angles = 128, int radii = 24) {
  TauReport rep;
  rep.angles = angles;
  rep.radii = radii;
  std::vector<double> best(radii, -1.0);
  std::vector<complex> where(radii);
  parallel_for(static_cast<std::size_t>(radii), [&](std::size_t i) {
    double r = 0.995 * static_cast<double>(i) / (radii - 1);
    int count = i == 0 ? 1 : angles;
    for (int j = 0; j < count; ++j) {
      complex z = std::polar(r, 2.0 * std::numbers::pi * j / angles);
      Jet jt = phi.jet(z);
      double v = (1.0 - r * r) / (1.0 - std::norm(jt.value)) * std::abs(jt.derivative);
      if (v > best[i]) {
        best[i] = v;
        where[i] = z;
      }
    }
  });
  for (int i = 0; i < radii; ++i) {
    if (best[i] > rep.estimate) {
      rep.estimate = best[i];
      rep.argmax = where[i];
    }
  }
  return rep;
}

}  // namespace holoflow
