#pragma once

// Generator tests on the disc: the interior/boundary inequalities, the
// Berkson–Porta factorization, and the a.e. boundary condition (necessary only).

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "holoflow/expression.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/radial.hpp"

namespace holoflow {

namespace detail {

/// 64 angles × radii {0.1, …, 0.9, 0.99}, plus the origin.
inline std::vector<complex> polar_grid(int angles = 64) {
  static const double radii[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  std::vector<complex> pts{0.0};
  for (double r : radii)
    for (int j = 0; j < angles; ++j) pts.push_back(std::polar(r, 2.0 * std::numbers::pi * j / angles));
  return pts;
}

}  // namespace detail

struct BoundaryPoint {
  double angle = 0.0;
  double value = 0.0;      // extrapolated radial limit (±inf when divergent)
  bool divergent = false;
  bool overflow = false;   // a radial sample was not finite
};

struct GeneratorCheckReport {
  bool interior_ok = false;
  bool boundary_ok = false;
  complex worst_interior_point{};
  double worst_interior_value = -std::numeric_limits<double>::infinity();
  double worst_boundary_angle = 0.0;
  double worst_boundary_value = -std::numeric_limits<double>::infinity();
  std::vector<BoundaryPoint> boundary;
  std::vector<complex> overflow_points;
  double interior_tol = 1e-9;
  double boundary_tol = 1e-6;

  bool pass() const { return interior_ok && boundary_ok; }
};

namespace detail {

/// Radial limit of Re(z̄ G(z)) along z = rξ, ξ = e^{iθ}.
inline BoundaryPoint boundary_value(const AnalyticMap& G, double theta, int kmax = 14) {
  complex xi = std::polar(1.0, theta);
  RadialLimit lim = radial_limit(
      [&](double r) {
        complex z = r * xi;
        complex v = G(z);
        return finite(v) ? (std::conj(z) * v).real() : std::numeric_limits<double>::infinity();
      },
      4, kmax);
  BoundaryPoint p;
  p.angle = theta;
  p.value = lim.value;
  p.divergent = lim.divergent;
  p.overflow = !lim.finite_samples;
  return p;
}

}  // namespace detail

/// Interior: Re(2z̄G + (1−|z|²)G′) ≤ 0 on the polar grid.
/// Boundary: radial limsup of Re(z̄G) ≤ 0 at 128 angles.
inline GeneratorCheckReport generator_check(const AnalyticMap& G) {
  GeneratorCheckReport rep;
  auto grid = detail::polar_grid();
  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    complex z = grid[i];
    Jet j = G.jet(z);
    complex q = 2.0 * std::conj(z) * j.value + (1.0 - std::norm(z)) * j.derivative;
    vals[i] = detail::finite(q) ? q.real() : std::numeric_limits<double>::quiet_NaN();
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isnan(vals[i])) {
      rep.overflow_points.push_back(grid[i]);
      rep.worst_interior_value = std::numeric_limits<double>::infinity();
      rep.worst_interior_point = grid[i];
      continue;
    }
    if (vals[i] > rep.worst_interior_value) {
      rep.worst_interior_value = vals[i];
      rep.worst_interior_point = grid[i];
    }
  }
  rep.interior_ok = rep.worst_interior_value <= rep.interior_tol;

  const int n = 128;
  rep.boundary.resize(n);
  parallel_for(n, [&](std::size_t j) {
    rep.boundary[j] = detail::boundary_value(G, 2.0 * std::numbers::pi * static_cast<double>(j) / n);
  });
  for (const auto& p : rep.boundary) {
    double v = std::isnan(p.value) ? std::numeric_limits<double>::infinity() : p.value;
    if (p.overflow) rep.overflow_points.push_back(std::polar(1.0, p.angle));
    if (v > rep.worst_boundary_value) {
      rep.worst_boundary_value = v;
      rep.worst_boundary_angle = p.angle;
    }
  }
  rep.boundary_ok = rep.worst_boundary_value <= rep.boundary_tol;
  return rep;
}

struct BerksonPortaReport {
  complex alpha{};
  std::vector<complex> points;
  std::vector<complex> F;
  double min_re_F = std::numeric_limits<double>::infinity();
  complex argmin{};
  int skipped = 0;
  bool pass = false;
};

/// F = G / ((α − z)(1 − ᾱz)) on the polar grid; pass iff min Re F ≥ −1e−9.
inline BerksonPortaReport berkson_porta_factor(const AnalyticMap& G, complex alpha) {
  if (!(std::abs(alpha) <= 1.0 + 1e-12))
    throw Error(ErrorCode::parameter_domain, "alpha must lie in the closed disc");
  BerksonPortaReport rep;
  rep.alpha = alpha;
  for (complex z : detail::polar_grid()) {
    complex den = (alpha - z) * (1.0 - std::conj(alpha) * z);
    if (std::abs(z - alpha) < 1e-6 || std::abs(den) < 1e-300) {
      ++rep.skipped;
      continue;
    }
    complex f = G(z) / den;
    if (!detail::finite(f)) {
      ++rep.skipped;
      continue;
    }
    rep.points.push_back(z);
    rep.F.push_back(f);
    if (f.real() < rep.min_re_F) {
      rep.min_re_F = f.real();
      rep.argmin = z;
    }
  }
  rep.pass = !rep.F.empty() && rep.min_re_F >= -1e-9;
  return rep;
}

struct BoundaryGeneratorReport {
  std::vector<BoundaryPoint> angles;
  double max_value = -std::numeric_limits<double>::infinity();
  double argmax_angle = 0.0;
  int divergent_count = 0;
  bool pass = false;
  bool h1_certified = false;
  bool necessary_only = true;  // set when H¹ membership could not be certified
  std::vector<double> h1_means;  // mean |G| on |z| = 1 − 2^{−k}
};

/// Max over 256 offset angles of the extrapolated Re(z̄G*); pass iff ≤ 1e−6.
inline BoundaryGeneratorReport boundary_generator_check(const AnalyticMap& G) {
  BoundaryGeneratorReport rep;
  const int n = 256;
  rep.angles.resize(n);
  parallel_for(n, [&](std::size_t j) {
    double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / n;
    BoundaryPoint p = detail::boundary_value(G, theta);
    // Slow approach near a boundary singularity: push the radii further in.
    if (p.divergent && !p.overflow) {
      BoundaryPoint q = detail::boundary_value(G, theta, 20);
      if (!q.divergent) p = q;
    }
    rep.angles[j] = p;
  });
  for (const auto& p : rep.angles) {
    if (p.divergent) ++rep.divergent_count;
    double v = std::isnan(p.value) ? std::numeric_limits<double>::infinity() : p.value;
    if (v > rep.max_value) {
      rep.max_value = v;
      rep.argmax_angle = p.angle;
    }
  }
  rep.pass = rep.max_value <= 1e-6;

  // H¹ certificate: the circle means of |G| must stay bounded as r → 1.
  std::vector<double> means;
  bool all_finite = true;
  for (int k = 4; k <= 14 && all_finite; ++k) {
    double r = 1.0 - std::ldexp(1.0, -k);
    std::size_t m = std::max<std::size_t>(256, std::size_t(8) << k);
    std::vector<double> mod(m);
    parallel_for(m, [&](std::size_t i) {
      mod[i] = std::abs(G(std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(i) / m)));
    });
    double acc = 0.0;
    for (double v : mod) acc += v;
    double mean = acc / static_cast<double>(m);
    if (!std::isfinite(mean)) all_finite = false;
    means.push_back(mean);
  }
  rep.h1_means = means;
  rep.h1_certified = all_finite && !detail::looks_divergent(means);
  rep.necessary_only = !rep.h1_certified;
  return rep;
}

}  // namespace holoflow
