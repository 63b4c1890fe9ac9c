#pragma once

// Compactness and analyticity tests for composition semigroups on H².

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "holoflow/expression.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/radial.hpp"

namespace holoflow {

struct RadialCurve {
  double angle = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
  double limit = 0.0;     // +inf when infinite
  bool infinite = false;
};

struct CompactnessReport {
  std::vector<RadialCurve> curves;
  bool immediately_compact = false;  // limit is ∞ at every ξ
  int finite_count = 0;
  double min_finite_limit = std::numeric_limits<double>::infinity();
  double min_finite_angle = 0.0;
};

namespace detail {

/// Samples f(r) at r = 1 − 2^{−k}. Verdict ∞ iff the last sample exceeds 1e4
/// with a monotone trend over the last five; a growing curve still below
/// 1e4 at k = 14 is followed out to k = 30.
template <class F>
RadialCurve radial_curve(double theta, const F& f) {
  RadialCurve c;
  c.angle = theta;
  auto sample = [&](int k) {
    double r = 1.0 - std::ldexp(1.0, -k);
    double v = f(r);
    c.radii.push_back(r);
    c.values.push_back(std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
  };
  for (int k = 4; k <= 14; ++k) sample(k);
  for (int k = 15; k <= 30 && c.values.back() <= 1e4 && looks_divergent(c.values); ++k) sample(k);
  if (std::isinf(c.values.back()) || (c.values.back() > 1e4 && looks_divergent(c.values))) {
    c.infinite = true;
    c.limit = std::numeric_limits<double>::infinity();
    return c;
  }
  std::size_t n = c.values.size();
  c.limit = richardson3(c.values[n - 3], c.values[n - 2], c.values[n - 1]);
  return c;
}

}  // namespace detail

/// lim |G(z)/(z − ξ)| along radii at `angles` equally spaced ξ.
inline CompactnessReport compactness_criterion(const AnalyticMap& G, int angles = 64) {
  CompactnessReport rep;
  rep.curves.resize(static_cast<std::size_t>(angles));
  parallel_for(static_cast<std::size_t>(angles), [&](std::size_t j) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / angles;
    complex xi = std::polar(1.0, theta);
    rep.curves[j] = detail::radial_curve(theta, [&](double r) { return std::abs(G(r * xi) / (r * xi - xi)); });
  });
  for (const auto& c : rep.curves) {
    if (c.infinite) continue;
    ++rep.finite_count;
    if (c.limit < rep.min_finite_limit) {
      rep.min_finite_limit = c.limit;
      rep.min_finite_angle = c.angle;
    }
  }
  rep.immediately_compact = rep.finite_count == 0;
  return rep;
}

struct AnalyticityReport {
  double theta = 0.0;      // largest passing multiple of π/64 (0 if none)
  int steps = 0;           // θ = steps·π/64
  bool analytic = false;
  std::vector<double> worst;  // worst boundary value per tested θ
};

namespace detail {

/// max over 128 angles of the extrapolated radial limit of Re(e^{iα} z̄ G).
inline double rotated_boundary_max(const AnalyticMap& G, double alpha) {
  const int n = 128;
  complex rot = std::polar(1.0, alpha);
  std::vector<double> vals(n);
  parallel_for(n, [&](std::size_t j) {
    complex xi = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / n);
    RadialLimit lim = radial_limit([&](double r) {
      complex z = r * xi;
      complex v = G(z);
      return finite(v) ? (rot * std::conj(z) * v).real() : std::numeric_limits<double>::infinity();
    });
    vals[j] = std::isnan(lim.value) ? std::numeric_limits<double>::infinity() : lim.value;
  });
  double best = -std::numeric_limits<double>::infinity();
  for (double v : vals) best = std::max(best, v);
  return best;
}

}  // namespace detail

/// Largest θ = jπ/64 (j ≤ 31) such that Re(e^{iα} z̄ G) has boundary limsup
/// ≤ 1e−6 for α ∈ {−θ, 0, θ} and every smaller θ also passes.
inline AnalyticityReport analyticity_probe(const AnalyticMap& G) {
  AnalyticityReport rep;
  double base = detail::rotated_boundary_max(G, 0.0);
  rep.worst.push_back(base);
  if (base > 1e-6) return rep;
  for (int j = 1; j <= 31; ++j) {
    double theta = std::numbers::pi * j / 64.0;
    double v = std::max(detail::rotated_boundary_max(G, theta), detail::rotated_boundary_max(G, -theta));
    rep.worst.push_back(std::max(v, base));
    if (v > 1e-6) break;
    rep.steps = j;
    rep.theta = theta;
  }
  rep.analytic = rep.steps > 0;
  return rep;
}

struct UnivalentCompactnessReport {
  std::vector<RadialCurve> curves;
  double max_limit = 0.0;
  double argmax_angle = 0.0;
  bool compact = false;
};

/// Per-ξ limit of (1 − |z|²)/(1 − |φ(z)|²); compact iff all ≤ 1e−3.
inline UnivalentCompactnessReport univalent_compactness_check(const AnalyticMap& phi, int angles = 64) {
  UnivalentCompactnessReport rep;
  rep.curves.resize(static_cast<std::size_t>(angles));
  parallel_for(static_cast<std::size_t>(angles), [&](std::size_t j) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / angles;
    complex xi = std::polar(1.0, theta);
    rep.curves[j] = detail::radial_curve(theta, [&](double r) {
      double den = 1.0 - std::norm(phi(r * xi));
      return den > 0.0 ? (1.0 - r * r) / den : std::numeric_limits<double>::infinity();
    });
  });
  for (const auto& c : rep.curves) {
    if (c.limit > rep.max_limit) {
      rep.max_limit = c.limit;
      rep.argmax_angle = c.angle;
    }
  }
  rep.compact = rep.max_limit <= 1e-3;
  return rep;
}

struct SupnormReport {
  double t = 0.0;
  double estimate = 0.0;
  double argmax_angle = 0.0;
  bool trace_class = false;
};

/// ‖φ_t‖∞ over 512 angles at r = 1 − 1e−6. flow(t, z) = φ_t(z).
template <class Flow>
SupnormReport supnorm_semiflow(const Flow& flow, double t) {
  const int n = 512;
  const double r = 1.0 - 1e-6;
  std::vector<double> mod(n);
  parallel_for(n, [&](std::size_t j) {
    mod[j] = std::abs(flow(t, std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) / n)));
  });
  SupnormReport rep;
  rep.t = t;
  for (int j = 0; j < n; ++j) {
    if (mod[j] > rep.estimate) {
      rep.estimate = mod[j];
      rep.argmax_angle = 2.0 * std::numbers::pi * j / n;
    }
  }
  rep.trace_class = rep.estimate < 1.0 - 1e-6;
  return rep;
}

enum class CompactOnset { immediate, eventual, never };

inline const char* to_string(CompactOnset o) {
  switch (o) {
    case CompactOnset::immediate: return "immediate";
    case CompactOnset::eventual: return "eventual";
    case CompactOnset::never: return "never";
  }
  return "never";
}

struct SupnormScan {
  std::vector<SupnormReport> points;
  CompactOnset onset = CompactOnset::never;
  std::optional<double> first_t;  // first grid time with estimate < 1
};

/// Supnorm at each positive grid time; the onset is immediate when the
/// smallest time already has ‖φ_t‖∞ < 1.
template <class Flow>
SupnormScan supnorm_scan(const Flow& flow, const std::vector<double>& times) {
  SupnormScan scan;
  for (double t : times) {
    if (!(t > 0.0)) continue;
    scan.points.push_back(supnorm_semiflow(flow, t));
    if (!scan.first_t && scan.points.back().trace_class) scan.first_t = t;
  }
  if (scan.first_t) {
    scan.onset = (!scan.points.empty() && scan.points.front().trace_class) ? CompactOnset::immediate
                                                                           : CompactOnset::eventual;
  }
  return scan;
}

}  // namespace holoflow
