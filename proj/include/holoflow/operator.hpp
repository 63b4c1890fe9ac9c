#pragma once

// Truncated matrices of weighted composition operators and generators in the
// Hardy basis zⁿ or the Fock basis zⁿ/√n!, plus the probes that run on them.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/ode.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/taylor.hpp"

namespace holoflow {

enum class Basis { hardy, fock };

inline const char* to_string(Basis b) { return b == Basis::hardy ? "hardy" : "fock"; }

struct TruncatedOperator {
  Eigen::MatrixXcd matrix;
  Basis basis = Basis::hardy;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

namespace detail {

/// Smallest radius keeping the r^{−(N−1)} amplification of roundoff below 1e4.
inline double matrix_radius(std::size_t N) {
  if (N <= 1) return 0.5;
  return std::max(0.5, std::pow(1e4, -1.0 / static_cast<double>(N - 1)));
}

/// √(k!/n!) via log-Gamma.
inline double factorial_ratio_sqrt(std::size_t k, std::size_t n) {
  return std::exp(0.5 * (std::lgamma(static_cast<double>(k) + 1.0) - std::lgamma(static_cast<double>(n) + 1.0)));
}

inline void check_matrix_finite(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!finite(m(i, j)))
        throw Error(ErrorCode::non_finite, "non-finite matrix entry (" + std::to_string(i) + ", " +
                                               std::to_string(j) + ")");
}

/// Column n holds the coefficients of sample(n, z) in the chosen basis.
template <class ColumnSample>
Eigen::MatrixXcd sampled_matrix(const ColumnSample& sample, std::size_t N, Basis basis, double radius) {
  Eigen::MatrixXcd out(N, N);
  const std::size_t M = 4 * N;
  if (basis == Basis::hardy) {
    auto pts = circle_points(M, radius);
    parallel_for(N, [&](std::size_t n) {
      std::vector<complex> s(M);
      for (std::size_t k = 0; k < M; ++k) {
        s[k] = sample(n, pts[k]);
        check_finite(s[k], pts[k]);
      }
      auto c = dft_coeffs(s, N - 1, radius);
      for (std::size_t k = 0; k < N; ++k) out(k, n) = c[k];
    });
    return out;
  }
  // Fock: coefficient k is read on |z| = max(1, √k), then scaled by √(k!/n!).
  parallel_for(N, [&](std::size_t n) {
    for (std::size_t k = 0; k < N; ++k) {
      double r = std::max(1.0, std::sqrt(static_cast<double>(k)));
      auto pts = circle_points(M, r);
      complex acc = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        complex v = sample(n, pts[m]);
        check_finite(v, pts[m]);
        acc += v * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((k * m) % M) / static_cast<double>(M));
      }
      out(k, n) = acc / static_cast<double>(M) * std::pow(r, -static_cast<double>(k)) *
                  factorial_ratio_sqrt(k, n);
    }
  });
  return out;
}

inline Eigen::MatrixXcd poly_columns_to_matrix(const std::vector<Poly>& cols, std::size_t N, Basis basis) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t k = 0; k < N && k < cols[n].size(); ++k)
      out(k, n) = basis == Basis::hardy ? cols[n][k] : cols[n][k] * factorial_ratio_sqrt(k, n);
  return out;
}

}  // namespace detail

/// Matrix of f ↦ w·(f∘φ) from callables; the extraction radius defaults to
/// detail::matrix_radius(N) for the Hardy basis.
template <class W, class Phi>
TruncatedOperator compose_matrix_fn(const W& w, const Phi& phi, std::size_t N, Basis basis = Basis::hardy,
                                    double radius = 0.0) {
  if (N == 0) throw Error(ErrorCode::parameter_domain, "matrix size must be positive");
  if (basis == Basis::fock && N > 170) throw Error(ErrorCode::overflow, "Fock matrices need N <= 170");
  double r = radius > 0.0 ? radius : detail::matrix_radius(N);
  auto sample = [&](std::size_t n, complex z) {
    return w(z) * detail::ipow(phi(z), static_cast<int>(n));
  };
  TruncatedOperator T{detail::sampled_matrix(sample, N, basis, r), basis};
  return T;
}

/// Truncated matrix of W_{w,φ}: column n = coefficients of w·φⁿ.
inline TruncatedOperator weighted_compose_matrix(const std::optional<AnalyticMap>& w, const AnalyticMap& phi,
                                                 std::size_t N, Basis basis = Basis::hardy,
                                                 double radius = 0.0) {
  if (N == 0) throw Error(ErrorCode::parameter_domain, "matrix size must be positive");
  if (basis == Basis::fock && N > 170) throw Error(ErrorCode::overflow, "Fock matrices need N <= 170");
  auto pphi = phi.polynomial(N);
  auto pw = w ? w->polynomial(N) : std::optional<detail::Poly>(detail::Poly{1.0});
  if (pphi && pw) {
    std::vector<detail::Poly> cols(N);
    detail::Poly power{1.0};
    for (std::size_t n = 0; n < N; ++n) {
      cols[n] = detail::poly_mul(*pw, power, N);
      power = detail::poly_mul(power, *pphi, N);
    }
    return {detail::poly_columns_to_matrix(cols, N, basis), basis};
  }
  if (w) return compose_matrix_fn([&](complex z) { return (*w)(z); }, phi, N, basis, radius);
  return compose_matrix_fn([](complex) { return complex(1.0); }, phi, N, basis, radius);
}

/// Truncated matrix of A f = G f′ + g f in the Hardy basis.
inline TruncatedOperator generator_matrix(const AnalyticMap& G, const AnalyticMap& g, std::size_t N,
                                          double radius = 0.0) {
  if (N == 0) throw Error(ErrorCode::parameter_domain, "matrix size must be positive");
  auto pG = G.polynomial(N + 1);
  auto pg = g.polynomial(N);
  if (pG && pg) {
    std::vector<detail::Poly> cols(N);
    for (std::size_t n = 0; n < N; ++n) {
      detail::Poly col(N, complex(0.0));
      // n G z^{n−1}
      if (n > 0)
        for (std::size_t i = 0; i < pG->size() && i + n - 1 < N; ++i)
          col[i + n - 1] += static_cast<double>(n) * (*pG)[i];
      // g zⁿ
      for (std::size_t i = 0; i < pg->size() && i + n < N; ++i) col[i + n] += (*pg)[i];
      cols[n] = std::move(col);
    }
    return {detail::poly_columns_to_matrix(cols, N, Basis::hardy), Basis::hardy};
  }
  double r = radius > 0.0 ? radius : detail::matrix_radius(N);
  auto sample = [&](std::size_t n, complex z) {
    complex v = g(z) * detail::ipow(z, static_cast<int>(n));
    if (n > 0) v += static_cast<double>(n) * G(z) * detail::ipow(z, static_cast<int>(n) - 1);
    return v;
  };
  return {detail::sampled_matrix(sample, N, Basis::hardy, r), Basis::hardy};
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

enum class PowerMode { converged, divergent, oscillating };

inline const char* to_string(PowerMode m) {
  switch (m) {
    case PowerMode::converged: return "converged";
    case PowerMode::divergent: return "divergent";
    case PowerMode::oscillating: return "oscillating";
  }
  return "oscillating";
}

struct PowerLimitReport {
  PowerMode mode = PowerMode::oscillating;
  Eigen::MatrixXcd limit;
  int rank = 0;
  std::optional<complex> evaluation_point;  // α when the limit is f ↦ f(α)·1
  bool unbounded_limit = false;             // limit is evaluation at a boundary point
  std::size_t iterations = 0;
  double sup_norm = 0.0;                    // max Frobenius norm of Tⁿ seen
  std::vector<double> step_differences;     // ‖Tⁿ⁺¹ − Tⁿ‖_F
};

namespace detail {

inline int numerical_rank(const Eigen::MatrixXcd& m, double rel = 1e-6) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

/// Row 0 of a rank-one limit against δ_α: αⁿ (Hardy) or αⁿ/√n! (Fock).
inline std::optional<complex> match_evaluation(const Eigen::MatrixXcd& P, Basis basis) {
  const Eigen::Index N = P.rows();
  if (N < 2 || std::abs(P(0, 0) - 1.0) > 1e-6) return std::nullopt;
  complex alpha = P(0, 1);
  double scale = std::max(1.0, P.norm());
  for (Eigen::Index n = 0; n < N; ++n) {
    complex expect = ipow(alpha, static_cast<int>(n));
    if (basis == Basis::fock) expect *= factorial_ratio_sqrt(0, static_cast<std::size_t>(n));
    if (std::abs(P(0, n) - expect) > 1e-6 * scale) return std::nullopt;
  }
  if (P.bottomRows(N - 1).norm() > 1e-6 * scale) return std::nullopt;
  return alpha;
}

/// Rank-one limit whose first row does not decay: the truncation of
/// evaluation at a boundary point, whose norm grows like √N.
inline std::optional<complex> match_boundary_evaluation(const Eigen::MatrixXcd& P) {
  const Eigen::Index N = P.rows();
  if (N < 8 || std::abs(P(0, 0) - 1.0) > 1e-6) return std::nullopt;
  double scale = std::max(1.0, P.norm());
  if (P.bottomRows(N - 1).norm() > 1e-6 * scale) return std::nullopt;
  double tail = 0.0;
  Eigen::Index from = 3 * N / 4;
  for (Eigen::Index n = from; n < N; ++n) tail += std::abs(P(0, n));
  if (tail / static_cast<double>(N - from) < 0.5) return std::nullopt;
  complex a = P(0, 1);
  return std::abs(a) > 0 ? a / std::abs(a) : complex(1.0);
}

}  // namespace detail

/// Stepping Tⁿ → Tⁿ⁺¹ until ‖Tⁿ⁺¹ − Tⁿ‖_F < tol, confirmed by one squaring.
inline PowerLimitReport power_limit(const TruncatedOperator& T, std::size_t nmax = 2000, double tol = 1e-8) {
  PowerLimitReport rep;
  const Eigen::MatrixXcd& A = T.matrix;
  Eigen::MatrixXcd P = A;
  rep.sup_norm = P.norm();
  if (rep.sup_norm > 1e15) throw Error(ErrorCode::overflow, "operator norm above 1e15");
  for (std::size_t n = 1; n <= nmax; ++n) {
    Eigen::MatrixXcd next = P * A;
    double diff = (next - P).norm();
    double nn = next.norm();
    rep.step_differences.push_back(diff);
    rep.sup_norm = std::max(rep.sup_norm, nn);
    rep.iterations = n + 1;
    if (!std::isfinite(nn) || nn > 1e15) throw Error(ErrorCode::overflow, "iterate norm above 1e15");
    if (nn > 1e6) {
      rep.mode = PowerMode::divergent;
      rep.limit = next;
      return rep;
    }
    P = std::move(next);
    if (diff < tol) {
      Eigen::MatrixXcd sq = P * P;
      if ((sq - P).norm() < 10.0 * tol * std::max(1.0, P.norm())) {
        rep.mode = PowerMode::converged;
        rep.limit = P;
        rep.rank = detail::numerical_rank(P);
        if (rep.rank == 1) rep.evaluation_point = detail::match_evaluation(P, T.basis);
        if (rep.rank == 1 && !rep.evaluation_point && T.basis == Basis::hardy) {
          if (auto xi = detail::match_boundary_evaluation(P)) {
            rep.mode = PowerMode::divergent;
            rep.unbounded_limit = true;
            rep.evaluation_point = xi;
          }
        }
        return rep;
      }
    }
  }
  rep.mode = PowerMode::oscillating;
  rep.limit = P;
  return rep;
}

struct C0ProbeReport {
  std::vector<double> times;
  std::vector<double> norms;    // ‖T_t‖₂ on the truncation
  std::vector<double> defects;  // max_n ‖T_t e_n − e_n‖
  double sup_norm = 0.0;
  bool bounded = false;
  bool monotone = false;
  double final_defect = 0.0;
  int levels = 0;
  bool pass = false;
};

/// Strong-continuity probe on t = δ·2^{−j}. Runs j = 0..min_levels and keeps
/// halving (up to max_levels) while the defect is still above tol.
/// flow(t, z) = φ_t(z); weight(t, z) = w_t(z) or empty.
template <class Flow>
C0ProbeReport c0_probe(const Flow& flow, std::size_t N, double delta = 0.5,
                       const std::function<complex(double, complex)>& weight = {},
                       Basis basis = Basis::hardy, double tol = 1e-6, int min_levels = 10,
                       int max_levels = 40) {
  C0ProbeReport rep;
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  for (int j = 0; j <= max_levels; ++j) {
    double t = delta * std::ldexp(1.0, -j);
    auto phi_t = [&](complex z) { return flow(t, z); };
    TruncatedOperator T = weight ? compose_matrix_fn([&](complex z) { return weight(t, z); }, phi_t, N, basis)
                                 : compose_matrix_fn([](complex) { return complex(1.0); }, phi_t, N, basis);
    double norm = spectral_norm(T.matrix);
    double defect = (T.matrix - I).colwise().norm().maxCoeff();
    rep.times.push_back(t);
    rep.norms.push_back(norm);
    rep.defects.push_back(defect);
    rep.levels = j + 1;
    if (j >= min_levels && defect <= tol) break;
  }
  rep.sup_norm = 0.0;
  for (double v : rep.norms) rep.sup_norm = std::max(rep.sup_norm, v);
  rep.bounded = std::isfinite(rep.sup_norm) && rep.sup_norm <= 1e6;
  // Monotone once the defect is below 1; before that it saturates near 2
  // for rotations and may wobble.
  rep.monotone = true;
  for (std::size_t j = 1; j < rep.defects.size(); ++j)
    if (rep.defects[j - 1] < 1.0 && rep.defects[j] > rep.defects[j - 1] * (1.0 + 1e-9) + 1e-13)
      rep.monotone = false;
  rep.final_defect = rep.defects.back();
  rep.pass = rep.bounded && rep.monotone && rep.final_defect <= tol;
  return rep;
}

struct DissipativityReport {
  double omega = 0.0;  // λ_max((A + A*)/2)
  bool contractive = false;
};

inline DissipativityReport dissipativity_probe(const TruncatedOperator& A) {
  Eigen::MatrixXcd H = 0.5 * (A.matrix + A.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::eigensolver, "Hermitian eigensolver failed");
  DissipativityReport rep;
  rep.omega = es.eigenvalues().maxCoeff();
  rep.contractive = rep.omega <= 1e-9;
  return rep;
}

struct DissipativityTrend {
  std::vector<std::size_t> sizes;
  std::vector<double> omegas;
};

inline DissipativityTrend dissipativity_trend(const AnalyticMap& G, const AnalyticMap& g,
                                              std::vector<std::size_t> sizes = {16, 32, 64}) {
  DissipativityTrend tr;
  tr.sizes = sizes;
  for (std::size_t N : sizes) tr.omegas.push_back(dissipativity_probe(generator_matrix(G, g, N)).omega);
  return tr;
}

/// w_t(z) = exp(∫₀ᵗ g(φ_s(z)) ds), integrated along the trajectory of G.
inline complex weighted_cocycle(const AnalyticMap& G, const AnalyticMap& g, double t, complex z,
                                const ODEConfig& config = {}) {
  ODEResult r = integrate_with_aux(G, g, z, t, config, G.domain());
  return std::exp(r.integral);
}

}  // namespace holoflow
