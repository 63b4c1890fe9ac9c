#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"

namespace holoflow {

/// Coefficients c_0..c_N of a power series, extracted on the circle |z| = radius.
struct TaylorSeries {
  std::vector<complex> coeffs;
  double radius = 0.5;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  complex operator()(complex z) const {
    complex acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * z + coeffs[n];
    return acc;
  }
};

namespace detail {

inline void check_finite(complex v, complex z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorCode::non_finite, "non-finite sample at z = " + fmt_complex(z));
}

/// Coefficients 0..N from M equispaced samples on |z| = r, by direct DFT.
/// samples[k] = f(r e^{2πik/M}).
inline std::vector<complex> dft_coeffs(const std::vector<complex>& samples, std::size_t N, double r) {
  const std::size_t M = samples.size();
  std::vector<complex> out(N + 1);
  // Twiddle table; indices reduced mod M keep the phases exact.
  std::vector<complex> roots(M);
  for (std::size_t k = 0; k < M; ++k)
    roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M));
  for (std::size_t n = 0; n <= N; ++n) {
    complex acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t k = 0; k < M; ++k) {
      acc += samples[k] * roots[idx];
      idx += n;
      if (idx >= M) idx %= M;
    }
    out[n] = acc / static_cast<double>(M) * std::pow(r, -static_cast<double>(n));
  }
  return out;
}

inline std::vector<complex> circle_points(std::size_t M, double r) {
  std::vector<complex> pts(M);
  for (std::size_t k = 0; k < M; ++k)
    pts[k] = std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M));
  return pts;
}

}  // namespace detail

/// Cauchy-integral extraction with M = 4(N+1) samples on |z| = r.
template <class F>
TaylorSeries taylor_coeffs(const F& f, std::size_t N, double r = 0.5) {
  if (!(r > 0.0)) throw Error(ErrorCode::parameter_domain, "extraction radius must be positive");
  const std::size_t M = 4 * (N + 1);
  auto pts = detail::circle_points(M, r);
  std::vector<complex> samples(M);
  for (std::size_t k = 0; k < M; ++k) {
    samples[k] = f(pts[k]);
    detail::check_finite(samples[k], pts[k]);
  }
  return {detail::dft_coeffs(samples, N, r), r};
}

}  // namespace holoflow
