#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace holoflow {

/// Estimate of lim_{r→1} f(r) from samples at r = 1 − 2^{−k}.
struct RadialLimit {
  double value = 0.0;     // ±inf when divergent
  bool divergent = false;
  bool finite_samples = true;
  std::vector<double> samples;
};

namespace detail {

/// Monotone over the last `window` samples with increments that do not
/// shrink geometrically: the signature of a blow-up (log growth included).
inline bool looks_divergent(const std::vector<double>& s, std::size_t window = 5,
                            double min_ratio = 0.9) {
  if (s.size() < window) return false;
  std::size_t start = s.size() - window;
  double first = s[start + 1] - s[start];
  if (first == 0.0) return false;
  double prev = first;
  for (std::size_t j = start + 1; j + 1 < s.size(); ++j) {
    double d = s[j + 1] - s[j];
    if ((d > 0) != (first > 0) || d == 0.0) return false;
    if (std::abs(d) < min_ratio * std::abs(prev)) return false;
    prev = d;
  }
  return true;
}

/// Two-level Richardson on samples at steps h, h/2, h/4 (error ~ a h + b h²).
inline double richardson3(double v0, double v1, double v2) {
  double r0 = 2.0 * v1 - v0;
  double r1 = 2.0 * v2 - v1;
  return (4.0 * r1 - r0) / 3.0;
}

}  // namespace detail

template <class F>
RadialLimit radial_limit(const F& f, int kmin = 4, int kmax = 14) {
  RadialLimit out;
  for (int k = kmin; k <= kmax; ++k) {
    double r = 1.0 - std::ldexp(1.0, -k);
    double v = f(r);
    if (!std::isfinite(v)) {
      out.finite_samples = false;
      out.divergent = true;
      out.value = std::isnan(v) ? std::numeric_limits<double>::quiet_NaN() : v;
      out.samples.push_back(v);
      return out;
    }
    out.samples.push_back(v);
  }
  const auto& s = out.samples;
  if (detail::looks_divergent(s)) {
    out.divergent = true;
    double inf = std::numeric_limits<double>::infinity();
    out.value = s.back() > s[s.size() - 2] ? inf : -inf;
    return out;
  }
  std::size_t n = s.size();
  out.value = n >= 3 ? detail::richardson3(s[n - 3], s[n - 2], s[n - 1]) : s.back();
  return out;
}

}  // namespace holoflow
