#pragma once

// Fock space: affine symbols φ(z) = az + b, weighted operators with
// exp-quadratic weights, semigroups, and truncated matrices in the basis
// ẽ_n = zⁿ/√n!.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/operator.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/quadratic.hpp"

namespace holoflow {

struct FockSymbol {
  complex a{1.0};
  complex b{0.0};

  complex operator()(complex z) const { return a * z + b; }
};

struct ExpQuadratic {
  complex p{0.0}, q{0.0}, r{0.0};

  complex exponent(complex z) const { return p + q * z + r * z * z; }
  complex operator()(complex z) const { return std::exp(exponent(z)); }
};

struct FockWeight {
  std::variant<ExpQuadratic, AnalyticMap> form = ExpQuadratic{};

  static FockWeight one() { return {}; }
  static FockWeight exp_quadratic(complex p, complex q, complex r) { return {ExpQuadratic{p, q, r}}; }
  static FockWeight general(AnalyticMap w) { return {std::move(w)}; }

  bool is_exp_quadratic() const { return std::holds_alternative<ExpQuadratic>(form); }
  const ExpQuadratic& quadratic() const { return std::get<ExpQuadratic>(form); }

  complex operator()(complex z) const {
    if (auto e = std::get_if<ExpQuadratic>(&form)) return (*e)(z);
    return std::get<AnalyticMap>(form)(z);
  }
};

enum class FockCase { dissipative, rotational };

inline const char* to_string(FockCase c) { return c == FockCase::dissipative ? "dissipative" : "rotational"; }

struct FockSemigroupSpec {
  complex lambda{-1.0};
  complex C{0.0};
  complex mu{0.0};
  FockCase kind = FockCase::dissipative;

  void validate() const {
    const double tol = 1e-12;
    if (kind == FockCase::dissipative && !(lambda.real() < 0.0))
      throw Error(ErrorCode::invalid_spec, "dissipative case needs Re lambda < 0, got " + detail::fmt_complex(lambda));
    if (kind == FockCase::rotational && std::abs(lambda.real()) > tol)
      throw Error(ErrorCode::invalid_spec, "rotational case needs lambda in iR, got " + detail::fmt_complex(lambda));
  }

  /// Tag inferred from λ; throws when λ has positive real part.
  static FockCase infer(complex lambda) {
    if (std::abs(lambda.real()) <= 1e-12) return FockCase::rotational;
    if (lambda.real() < 0.0) return FockCase::dissipative;
    throw Error(ErrorCode::invalid_spec, "Re lambda > 0 gives no semigroup on the Fock space");
  }
};

namespace detail {

inline bool unimodular(complex a) { return std::abs(std::abs(a) - 1.0) <= 1e-12; }

}  // namespace detail

struct FockClassification {
  bool bounded = false;
  bool compact = false;
  double norm = std::numeric_limits<double>::infinity();
  // Norm with respect to the orthonormal basis zⁿ/√n!; differs from `norm`
  // by a factor 2 in the exponent (see README, Fock normalization).
  double basis_norm = std::numeric_limits<double>::infinity();
};

/// Boundedness, compactness and norm of C_φ on 𝓕^ν. The classification does
/// not depend on ν.
inline FockClassification fock_classify_symbol(const FockSymbol& s, double nu = 2.0) {
  if (!(nu > 0.0)) throw Error(ErrorCode::parameter_domain, "nu must be positive");
  FockClassification c;
  double ma = std::abs(s.a);
  if (ma < 1.0 && !detail::unimodular(s.a)) {
    double e = std::norm(s.b) / (1.0 - ma * ma);
    c.bounded = true;
    c.compact = true;
    c.norm = std::exp(0.25 * e);
    c.basis_norm = std::exp(0.5 * e);
  } else if (detail::unimodular(s.a) && std::abs(s.b) <= 1e-12) {
    c.bounded = true;
    c.norm = 1.0;
    c.basis_norm = 1.0;
  }
  return c;
}

struct FockIterate {
  complex coefficient{};  // aⁿ
  complex constant{};     // (1 − aⁿ)/(1 − a)·b, or n·b when a = 1
  std::optional<complex> limit_point;  // T f = f(limit_point) when |a| < 1
  bool converges = false;
  bool bounded = false;
};

inline FockIterate fock_iterate(const FockSymbol& s, unsigned n) {
  FockIterate it;
  it.coefficient = std::pow(s.a, static_cast<double>(n));
  if (n == 0) it.coefficient = 1.0;
  if (std::abs(s.a - 1.0) == 0.0) {
    it.coefficient = 1.0;
    it.constant = static_cast<double>(n) * s.b;
  } else {
    it.constant = (1.0 - it.coefficient) / (1.0 - s.a) * s.b;
  }
  auto cls = fock_classify_symbol(s);
  it.bounded = cls.bounded;
  if (std::abs(s.a) < 1.0 && !detail::unimodular(s.a)) {
    it.limit_point = s.b / (1.0 - s.a);
    it.converges = true;
  } else if (cls.bounded && std::abs(s.a - 1.0) <= 1e-12) {
    it.converges = true;  // identity
  }
  return it;
}

struct FockGeneratorClass {
  bool valid = false;           // by the (a, b) rule
  bool criterion_valid = false; // by the sampled limsup
  bool agrees = false;
  std::array<double, 3> limsup{};  // max Re(z̄G) at |z| = 10, 100, 1000
};

/// G(z) = az + b generates a semigroup of bounded operators iff Re a < 0, or
/// a ∈ iℝ with b = 0.
inline FockGeneratorClass classify_fock_generator(complex a, complex b) {
  FockGeneratorClass g;
  g.valid = a.real() < -1e-12 || (std::abs(a.real()) <= 1e-12 && std::abs(b) <= 1e-12);
  const int n = 256;
  const double radii[3] = {10.0, 100.0, 1000.0};
  for (int k = 0; k < 3; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      complex z = std::polar(radii[k], 2.0 * std::numbers::pi * j / n);
      best = std::max(best, (std::conj(z) * (a * z + b)).real());
    }
    g.limsup[k] = best;
  }
  // lim sup ≤ 0: the samples must not grow positive with |z|.
  double scale = 1e-12 * (std::abs(a) + std::abs(b) + 1.0);
  bool positive_growth = g.limsup[2] > scale * 1e6 && g.limsup[2] > g.limsup[1];
  g.criterion_valid = !positive_growth;
  g.agrees = g.valid == g.criterion_valid;
  return g;
}

struct FockFlowPoint {
  complex value{};
  complex generator{};  // G(z) = λ(z + C)
};

/// φ_t(z) = e^{λt}z + C(e^{λt} − 1). The unweighted rotational case needs C = 0.
inline FockFlowPoint fock_semigroup(const FockSemigroupSpec& spec, double t, complex z) {
  spec.validate();
  if (!(t >= 0.0)) throw Error(ErrorCode::parameter_domain, "t must be nonnegative");
  if (spec.kind == FockCase::rotational && std::abs(spec.C) > 1e-12)
    throw Error(ErrorCode::invalid_spec, "rotational semigroups of composition operators need C = 0");
  complex e = std::exp(spec.lambda * t);
  return {e * z + spec.C * (e - 1.0), spec.lambda * (z + spec.C)};
}

namespace detail {

inline complex fock_flow_value(const FockSemigroupSpec& spec, double t, complex z) {
  complex e = std::exp(spec.lambda * t);
  return e * z + spec.C * (e - 1.0);
}

/// Exponent 2Re(p + qz + rz²) + |az + b|² − |z|² as a form in (x, y).
inline QuadraticForm2D fock_exponent_form(const ExpQuadratic& w, const FockSymbol& s) {
  double m = std::norm(s.a) - 1.0;
  complex u = w.q + s.a * std::conj(s.b);
  QuadraticForm2D f;
  f.H = {{{2.0 * (m + 2.0 * w.r.real()), -4.0 * w.r.imag()}, {-4.0 * w.r.imag(), 2.0 * (m - 2.0 * w.r.real())}}};
  f.l = {2.0 * u.real(), -2.0 * u.imag()};
  f.c = 2.0 * w.p.real() + std::norm(s.b);
  return f;
}

}  // namespace detail

enum class FockWeightCase { compact, bounded, unbounded };

inline const char* to_string(FockWeightCase c) {
  switch (c) {
    case FockWeightCase::compact: return "compact";
    case FockWeightCase::bounded: return "bounded";
    case FockWeightCase::unbounded: return "unbounded";
  }
  return "unbounded";
}

/// (i) |r| < β/2: compact; (ii) |r| = β/2 and (t = 0 or r = −(β/2)t²/|t|²)
/// with t = q + b̄a: bounded; otherwise unbounded.
inline FockWeightCase fock_weight_theorem(const ExpQuadratic& w, const FockSymbol& s, double beta,
                                          double tol = 1e-12) {
  double half = beta / 2.0;
  double mr = std::abs(w.r);
  if (mr < half - tol) return FockWeightCase::compact;
  if (std::abs(mr - half) > tol) return FockWeightCase::unbounded;
  complex t = w.q + std::conj(s.b) * s.a;
  if (std::abs(t) <= tol) return FockWeightCase::bounded;
  complex target = -half * t * t / std::norm(t);
  return std::abs(w.r - target) <= tol * std::max(1.0, half) ? FockWeightCase::bounded : FockWeightCase::unbounded;
}

struct FockWeightedReport {
  bool bounded = false;
  double M = std::numeric_limits<double>::infinity();
  double log_M = std::numeric_limits<double>::infinity();
  bool in_space = true;                  // w ∈ 𝓕^ν
  std::optional<bool> compact;           // exp-quadratic case only
  std::optional<FockWeightCase> theorem; // with the configured β
  std::optional<FockWeightCase> exact;   // from the Gaussian sup
  bool disagreement = false;
  std::string explanation;               // set when a disagreement is explained
  bool heuristic = false;                // general weights: grid estimate
  std::optional<bool> template_match;    // |a| = 1 only
};

namespace detail {

inline FockWeightCase exact_weight_case(const QuadraticForm2D& f, double sup) {
  if (!std::isfinite(sup)) return FockWeightCase::unbounded;
  auto e = f.eigen();
  double scale = std::max({1.0, std::abs(f.H[0][0]), std::abs(f.H[1][1]), std::abs(f.H[0][1])});
  return e.values[1] < -1e-12 * scale ? FockWeightCase::compact : FockWeightCase::bounded;
}

inline bool matches_template(const FockWeight& w, const FockSymbol& s, std::string* why = nullptr) {
  complex w0 = w(0.0);
  for (double r : {0.5, 1.0, 2.0})
    for (int j = 0; j < 8; ++j) {
      complex z = std::polar(r, 2.0 * std::numbers::pi * j / 8);
      complex expect = w0 * std::exp(-std::conj(s.b) * s.a * z);
      complex got = w(z);
      if (std::abs(got - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
        if (why)
          *why = "weight is not w(0)exp(-conj(b)az): w(" + fmt_complex(z) + ") = " + fmt_complex(got) +
                 ", expected " + fmt_complex(expect);
        return false;
      }
    }
  return true;
}

}  // namespace detail

/// Boundedness of f ↦ w·(f∘φ) on 𝓕^ν through M(w, φ) = sup |w|²e^{|φ|²−|z|²}.
/// Exp-quadratic weights are resolved exactly; β scales the (i)/(ii) test.
/// For |a| = 1 a weight off the template w(0)e^{−b̄az} is an error unless the
/// supremum already shows the operator unbounded.
inline FockWeightedReport fock_weighted_bounded(const FockWeight& w, const FockSymbol& s, double nu = 2.0,
                                                double beta = 1.0) {
  if (!(nu > 0.0)) throw Error(ErrorCode::parameter_domain, "nu must be positive");
  FockWeightedReport rep;
  std::string why;
  bool unimodular = detail::unimodular(s.a);
  if (unimodular) rep.template_match = detail::matches_template(w, s, &why);
  if (w.is_exp_quadratic()) {
    const auto& eq = w.quadratic();
    auto form = detail::fock_exponent_form(eq, s);
    double sup = sup_real_quadratic(form);
    if (unimodular && !*rep.template_match && std::isfinite(sup)) throw Error(ErrorCode::template_violation, why);
    rep.log_M = sup;
    rep.M = std::exp(sup);
    // e^{p+qz+rz²} is square integrable against e^{−|z|²} iff |r| < 1/2.
    rep.in_space = std::abs(eq.r) < 0.5;
    rep.bounded = std::isfinite(sup) && rep.in_space;
    rep.exact = detail::exact_weight_case(form, sup);
    rep.compact = *rep.exact == FockWeightCase::compact;
    if (!detail::unimodular(s.a) && std::abs(s.a) < 1.0) {
      rep.theorem = fock_weight_theorem(eq, s, beta);
      if (*rep.theorem != *rep.exact) {
        rep.disagreement = true;
        double beta_star = nu * (1.0 - std::norm(s.a)) / 2.0;
        if (fock_weight_theorem(eq, s, beta_star, 1e-9) == *rep.exact) {
          rep.explanation = "agrees with beta = nu(1-|a|^2)/2 = " + detail::fmt_real(beta_star);
        } else {
          throw Error(ErrorCode::classification_mismatch,
                      std::string("theorem gives ") + to_string(*rep.theorem) + " but the exact supremum gives " +
                          to_string(*rep.exact));
        }
      }
    }
    return rep;
  }
  // General weight: sup over a polar grid, radii up to 20, growth flagged.
  if (unimodular && !*rep.template_match) throw Error(ErrorCode::template_violation, why);
  rep.heuristic = true;
  std::vector<double> ring_max;
  for (double r = 0.0; r <= 20.0 + 1e-9; r += 0.5) {
    int n = r == 0.0 ? 1 : 256;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      complex z = std::polar(r, 2.0 * std::numbers::pi * j / n);
      complex v = w(z);
      double e = 2.0 * std::log(std::abs(v)) + std::norm(s(z)) - r * r;
      best = std::max(best, e);
    }
    ring_max.push_back(best);
  }
  double top = *std::max_element(ring_max.begin(), ring_max.end());
  std::size_t n = ring_max.size();
  bool growing = ring_max[n - 1] > ring_max[n - 5] + 1.0 && ring_max[n - 1] >= top - 1e-9;
  rep.log_M = growing ? std::numeric_limits<double>::infinity() : top;
  rep.M = std::exp(rep.log_M);
  rep.bounded = !growing;
  return rep;
}

/// |w(0)| ≤ e^{−|b|²/2} for unimodular a.
inline bool fock_weighted_power_bounded(const FockSymbol& s, complex w0) {
  if (!detail::unimodular(s.a))
    throw Error(ErrorCode::wrong_regime, "power-boundedness test needs |a| = 1, got |a| = " +
                                             detail::fmt_real(std::abs(s.a)));
  return std::abs(w0) <= std::exp(-std::norm(s.b) / 2.0) + 1e-12;
}

/// Case-2 weight w_t(z) = w_t(0)exp(C̄(e^{λt} − 1)z).
inline complex fock_case2_weight(const FockSemigroupSpec& spec, double t, complex z) {
  complex e = std::exp(spec.lambda * t) - 1.0;
  return std::exp(spec.mu * t + std::norm(spec.C) * e + std::conj(spec.C) * e * z);
}

struct FockFlowSample {
  double t = 0.0;
  std::function<complex(complex)> w;
  std::function<complex(complex)> phi;
};

struct FockConformance {
  bool conformant = true;
  double max_phi_error = 0.0;
  double max_weight_error = 0.0;  // case 2: relative; case 1: fit residual
  std::optional<double> witness_t;
  std::optional<complex> witness_z;
  std::string reason;
};

namespace detail {

inline std::vector<complex> fock_check_points() {
  std::vector<complex> pts;
  for (int j = 0; j < 4; ++j)
    for (int k = 1; k <= 8; ++k) pts.push_back(std::polar(0.125 * k, std::numbers::pi * (2 * j + 1) / 4.0));
  return pts;
}

/// log(w(z)/w(0)) along the segment [0, z], unwrapping the branch.
inline complex unwrapped_log_ratio(const std::function<complex(complex)>& w, complex z, int steps = 64) {
  complex w0 = w(0.0);
  complex prev = w0, acc = 0.0;
  for (int i = 1; i <= steps; ++i) {
    complex cur = w(z * (static_cast<double>(i) / steps));
    acc += std::log(cur / prev);
    prev = cur;
  }
  return acc;
}

}  // namespace detail

/// Conformance of sampled (w_t, φ_t) with the two admissible forms.
inline FockConformance fock_weighted_semigroup_check(const FockSemigroupSpec& spec,
                                                     const std::vector<FockFlowSample>& samples) {
  spec.validate();
  FockConformance rep;
  auto pts = detail::fock_check_points();
  auto fail = [&](double t, complex z, std::string why) {
    if (rep.conformant) {
      rep.conformant = false;
      rep.witness_t = t;
      rep.witness_z = z;
      rep.reason = std::move(why);
    }
  };
  for (const auto& smp : samples) {
    for (complex z : pts) {
      complex expect = detail::fock_flow_value(spec, smp.t, z);
      double err = std::abs(smp.phi(z) - expect);
      rep.max_phi_error = std::max(rep.max_phi_error, err);
      if (err > 1e-9 * std::max(1.0, std::abs(expect))) fail(smp.t, z, "phi_t differs from the closed form");
    }
    if (spec.kind == FockCase::rotational) {
      complex w0 = smp.w(0.0);
      complex expect0 = fock_case2_weight(spec, smp.t, 0.0);
      double e0 = std::abs(w0 - expect0) / std::max(1.0, std::abs(expect0));
      rep.max_weight_error = std::max(rep.max_weight_error, e0);
      if (e0 > 1e-9) fail(smp.t, 0.0, "w_t(0) law fails");
      for (complex z : pts) {
        complex expect = std::exp(std::conj(spec.C) * (std::exp(spec.lambda * smp.t) - 1.0) * z);
        double err = std::abs(smp.w(z) / w0 - expect) / std::max(1.0, std::abs(expect));
        rep.max_weight_error = std::max(rep.max_weight_error, err);
        if (err > 1e-9) fail(smp.t, z, "w_t(z)/w_t(0) differs from exp(conj(C)(e^{lambda t}-1)z)");
      }
      continue;
    }
    // Case 1: log(w_t(z)/w_t(0)) = q z + r z², least squares on 32 points.
    Eigen::MatrixXcd A(pts.size(), 2);
    Eigen::VectorXcd y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      A(i, 0) = pts[i];
      A(i, 1) = pts[i] * pts[i];
      y(i) = detail::unwrapped_log_ratio(smp.w, pts[i]);
    }
    Eigen::VectorXcd coef = A.colPivHouseholderQr().solve(y);
    Eigen::VectorXcd res = A * coef - y;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double err = std::abs(res(i));
      rep.max_weight_error = std::max(rep.max_weight_error, err);
      if (err > 1e-8) fail(smp.t, pts[i], "log w_t is not quadratic");
    }
  }
  return rep;
}

/// Matrix of f ↦ w·(f∘φ) in the basis zⁿ/√n!. Without a weight the entries are
/// C(n,k)a^k b^{n−k}√(k!/n!), assembled in log space.
inline TruncatedOperator fock_matrix(const std::optional<FockWeight>& w, const FockSymbol& s, std::size_t N) {
  if (N == 0) throw Error(ErrorCode::parameter_domain, "matrix size must be positive");
  if (N > 170) throw Error(ErrorCode::overflow, "Fock matrices need N <= 170");
  if (w) {
    return compose_matrix_fn([&](complex z) { return (*w)(z); }, [&](complex z) { return s(z); }, N, Basis::fock);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
  double la = std::log(std::abs(s.a)), lb = std::log(std::abs(s.b));
  double pa = std::arg(s.a), pb = std::arg(s.b);
  parallel_for(N, [&](std::size_t n) {
    double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::size_t k = 0; k <= n; ++k) {
      std::size_t j = n - k;
      // 0⁰ = 1
      if ((k > 0 && s.a == 0.0) || (j > 0 && s.b == 0.0)) continue;
      double lgk = std::lgamma(static_cast<double>(k) + 1.0), lgj = std::lgamma(static_cast<double>(j) + 1.0);
      double logmag = (lgn - lgk - lgj) + (k ? k * la : 0.0) + (j ? j * lb : 0.0) + 0.5 * (lgk - lgn);
      double phase = (k ? k * pa : 0.0) + (j ? j * pb : 0.0);
      m(k, n) = std::polar(std::exp(logmag), phase);
    }
  });
  return {m, Basis::fock};
}

/// Row vector of f ↦ f(p) in the basis zⁿ/√n! placed in row 0 (the image is
/// the constants).
inline Eigen::MatrixXcd fock_evaluation_matrix(complex p, std::size_t N) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t n = 0; n < N; ++n) {
    double lg = 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
    P(0, n) = n == 0 ? complex(1.0) : std::polar(std::exp(n * std::log(std::abs(p)) - lg), n * std::arg(p));
  }
  return P;
}

}  // namespace holoflow
