#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace holoflow {

/// q(x, y) = ½ vᵀHv + l·v + c with v = (x, y) and H symmetric.
struct QuadraticForm2D {
  std::array<std::array<double, 2>, 2> H{};
  std::array<double, 2> l{};
  double c = 0.0;

  double operator()(double x, double y) const {
    return 0.5 * (H[0][0] * x * x + 2.0 * H[0][1] * x * y + H[1][1] * y * y) + l[0] * x + l[1] * y + c;
  }

  struct Eigen2 {
    std::array<double, 2> values;                   // nondecreasing
    std::array<std::array<double, 2>, 2> vectors;  // vectors[i] belongs to values[i]
  };

  /// Closed-form eigendecomposition of the symmetric 2×2 matrix.
  Eigen2 eigen() const {
    double a = H[0][0], b = H[0][1], d = H[1][1];
    double mean = 0.5 * (a + d);
    double rad = std::hypot(0.5 * (a - d), b);
    Eigen2 e{};
    e.values = {mean - rad, mean + rad};
    if (b == 0.0) {
      if (a <= d) {
        e.vectors = {{{1.0, 0.0}, {0.0, 1.0}}};
      } else {
        e.vectors = {{{0.0, 1.0}, {1.0, 0.0}}};
      }
      return e;
    }
    double theta = 0.5 * std::atan2(2.0 * b, a - d);  // direction of the larger eigenvalue
    double cs = std::cos(theta), sn = std::sin(theta);
    e.vectors = {{{-sn, cs}, {cs, sn}}};
    return e;
  }
};

/// sup over ℝ² of q; +∞ unless H ⪯ 0 and l ⟂ ker H.
inline double sup_real_quadratic(const QuadraticForm2D& q, double tol = 1e-12) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto e = q.eigen();
  double scale = std::max({1.0, std::abs(q.H[0][0]), std::abs(q.H[1][1]), std::abs(q.H[0][1])});
  double lscale = std::max(1.0, std::hypot(q.l[0], q.l[1]));
  double sup = q.c;
  for (int i = 0; i < 2; ++i) {
    double lam = e.values[i];
    double li = q.l[0] * e.vectors[i][0] + q.l[1] * e.vectors[i][1];
    if (lam > tol * scale) return inf;
    if (std::abs(lam) <= tol * scale) {
      if (std::abs(li) > tol * lscale) return inf;
      continue;
    }
    sup += -li * li / (2.0 * lam);
  }
  return sup;
}

}  // namespace holoflow
