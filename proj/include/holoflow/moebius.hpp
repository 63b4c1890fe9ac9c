#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"

namespace holoflow {

/// z ↦ (az+b)/(cz+d) with ad − bc ≠ 0.
class MoebiusTransform {
 public:
  static constexpr double kDegenerateTol = 1e-14;

  MoebiusTransform() = default;

  MoebiusTransform(complex a, complex b, complex c, complex d) : a_(a), b_(b), c_(c), d_(d) {
    if (std::abs(det()) < kDegenerateTol)
      throw Error(ErrorCode::degenerate,
                  "Moebius transform with ad-bc = " + detail::fmt_complex(det()));
  }

  static MoebiusTransform identity() { return {1.0, 0.0, 0.0, 1.0}; }

  /// b_α(z) = (α − z)/(1 − ᾱz), the involutive disc automorphism swapping 0 and α.
  static MoebiusTransform blaschke_swap(complex alpha) {
    return {-1.0, alpha, -std::conj(alpha), 1.0};
  }

  /// φ_r(z) = (z + r)/(1 + rz).
  static MoebiusTransform hyperbolic(double r) { return {1.0, r, r, 1.0}; }

  /// M(z) = (1 − z)/(1 + z), the self-inverse bijection 𝔻 → ℂ₊.
  static MoebiusTransform cayley() { return {-1.0, 1.0, 1.0, 1.0}; }

  static MoebiusTransform rotation(double theta) {
    return {std::polar(1.0, theta), 0.0, 0.0, 1.0};
  }

  complex a() const { return a_; }
  complex b() const { return b_; }
  complex c() const { return c_; }
  complex d() const { return d_; }
  complex det() const { return a_ * d_ - b_ * c_; }

  complex operator()(complex z) const { return apply(z); }

  complex apply(complex z) const {
    complex den = c_ * z + d_;
    if (std::abs(den) < kDegenerateTol)
      throw Error(ErrorCode::pole, "Moebius pole at z = " + detail::fmt_complex(z));
    return (a_ * z + b_) / den;
  }

  complex derivative(complex z) const {
    complex den = c_ * z + d_;
    if (std::abs(den) < kDegenerateTol)
      throw Error(ErrorCode::pole, "Moebius pole at z = " + detail::fmt_complex(z));
    return det() / (den * den);
  }

  /// Same map scaled to determinant one.
  MoebiusTransform normalized() const {
    complex s = std::sqrt(det());
    return MoebiusTransform(a_ / s, b_ / s, c_ / s, d_ / s, unchecked{});
  }

  MoebiusTransform inverse() const { return MoebiusTransform(d_, -b_, -c_, a_).normalized(); }

  /// Matches as maps, i.e. coefficient vectors proportional.
  bool equivalent(const MoebiusTransform& o, double tol = 1e-12) const {
    MoebiusTransform x = normalized(), y = o.normalized();
    auto close = [&](double sign) {
      return std::abs(x.a_ - sign * y.a_) < tol && std::abs(x.b_ - sign * y.b_) < tol &&
             std::abs(x.c_ - sign * y.c_) < tol && std::abs(x.d_ - sign * y.d_) < tol;
    };
    return close(1.0) || close(-1.0);
  }

  /// True iff the unit circle is mapped to itself (checked on boundary
  /// samples) and 0 lands inside the disc.
  bool is_disc_automorphism(int samples = 16, double tol = 1e-12) const {
    for (int k = 0; k < samples; ++k) {
      complex zeta = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25) / samples);
      complex den = c_ * zeta + d_;
      if (std::abs(den) < kDegenerateTol) return false;
      if (std::abs(std::abs((a_ * zeta + b_) / den) - 1.0) > tol) return false;
    }
    if (std::abs(d_) < kDegenerateTol) return false;
    return std::abs(b_ / d_) < 1.0;
  }

  /// Roots of cz² + (d − a)z − b = 0; a single finite root when c = 0.
  std::array<complex, 2> fixed_points() const {
    if (std::abs(c_) < kDegenerateTol) {
      complex diff = a_ - d_;
      complex root = std::abs(diff) < kDegenerateTol ? complex(0.0) : b_ / (d_ - a_) * complex(-1.0);
      return {root, root};
    }
    complex bq = d_ - a_;
    complex disc = std::sqrt(bq * bq + 4.0 * c_ * b_);
    // Stable quadratic roots.
    complex q = -0.5 * (bq + (std::real(std::conj(bq) * disc) >= 0 ? disc : -disc));
    complex r1 = q / c_;
    complex r2 = std::abs(q) > 0 ? -b_ / q : r1;
    return {r1, r2};
  }

  AnalyticMap to_map(Domain dom = Domain::disc) const {
    AnalyticMap z = AnalyticMap::identity(dom);
    return (a_ * z + b_) / (c_ * z + d_);
  }

  friend MoebiusTransform operator*(const MoebiusTransform& m1, const MoebiusTransform& m2) {
    return compose(m1, m2);
  }

  /// m1 ∘ m2, normalized to determinant one.
  friend MoebiusTransform compose(const MoebiusTransform& m1, const MoebiusTransform& m2) {
    complex a = m1.a_ * m2.a_ + m1.b_ * m2.c_;
    complex b = m1.a_ * m2.b_ + m1.b_ * m2.d_;
    complex c = m1.c_ * m2.a_ + m1.d_ * m2.c_;
    complex d = m1.c_ * m2.b_ + m1.d_ * m2.d_;
    complex det = a * d - b * c;
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (scale == 0.0 || std::abs(det) / (scale * scale) < kDegenerateTol)
      throw Error(ErrorCode::degenerate, "degenerate Moebius product");
    complex s = std::sqrt(det);
    return MoebiusTransform(a / s, b / s, c / s, d / s, unchecked{});
  }

 private:
  struct unchecked {};
  MoebiusTransform(complex a, complex b, complex c, complex d, unchecked)
      : a_(a), b_(b), c_(c), d_(d) {}

  complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

inline complex mobius_apply(const MoebiusTransform& m, complex z) { return m.apply(z); }

inline MoebiusTransform mobius_compose(const MoebiusTransform& m1, const MoebiusTransform& m2) {
  return compose(m1, m2);
}

/// The Möbius map sending z1, z2, z3 to w1, w2, w3 (all distinct).
inline MoebiusTransform mobius_through(complex z1, complex z2, complex z3, complex w1, complex w2,
                                       complex w3) {
  // T sends (z1, z2, z3) to (0, 1, ∞).
  auto to_standard = [](complex p1, complex p2, complex p3) {
    return MoebiusTransform(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1));
  };
  MoebiusTransform t = to_standard(z1, z2, z3);
  MoebiusTransform s = to_standard(w1, w2, w3);
  return compose(s.inverse(), t);
}

}  // namespace holoflow
