#pragma once

// Table-driven classification of iterates (discrete and continuous), and the
// isometry / similarity columns.

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "holoflow/dynamics.hpp"
#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/moebius.hpp"
#include "holoflow/operator.hpp"
#include "holoflow/radial.hpp"

namespace holoflow {

enum class SpaceFamily { hardy, bergman, bloch, little_bloch, bloch_gamma, hinf_nu };

inline const char* to_string(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::hardy: return "hardy";
    case SpaceFamily::bergman: return "bergman";
    case SpaceFamily::bloch: return "bloch";
    case SpaceFamily::little_bloch: return "little_bloch";
    case SpaceFamily::bloch_gamma: return "bloch_gamma";
    case SpaceFamily::hinf_nu: return "hinf_nu";
  }
  return "hardy";
}

struct SpaceTag {
  SpaceFamily family = SpaceFamily::hardy;
  double p = 2.0;      // Hᵖ, A^p_β, H^∞_{ν_p}
  double beta = 0.0;   // A^p_β
  double gamma = 1.0;  // 𝓑^γ

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::parameter_domain, m); };
    switch (family) {
      case SpaceFamily::hardy:
        if (!(p >= 1.0)) bad("H^p needs p >= 1");
        break;
      case SpaceFamily::bergman:
        if (!(p >= 1.0)) bad("A^p_beta needs p >= 1");
        if (!(beta > -1.0)) bad("A^p_beta needs beta > -1");
        break;
      case SpaceFamily::bloch_gamma:
        if (!(gamma > 0.0)) bad("B^gamma needs gamma > 0");
        break;
      case SpaceFamily::hinf_nu:
        if (!(p > 0.0)) bad("H^inf_nu needs p > 0");
        break;
      default: break;
    }
  }

  /// 𝓑^1 is the Bloch space itself.
  bool is_bloch() const {
    return family == SpaceFamily::bloch || (family == SpaceFamily::bloch_gamma && std::abs(gamma - 1.0) < 1e-12);
  }

  std::string name() const {
    auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v);
      return std::string(buf);
    };
    switch (family) {
      case SpaceFamily::hardy: return "H" + num(p);
      case SpaceFamily::bergman: return "A" + num(p) + "_" + num(beta);
      case SpaceFamily::bloch: return "B";
      case SpaceFamily::little_bloch: return "B0";
      case SpaceFamily::bloch_gamma: return "B^" + num(gamma);
      case SpaceFamily::hinf_nu: return "Hinf_" + num(p);
    }
    return "H2";
  }

  /// Accepts H2, Hp (p numeric), A2, A<p>_<beta>, B, B0, B^<gamma>, Hinf_nu,
  /// Hinf_<p>. `beta` and `nu` fill parameters the text leaves out.
  static SpaceTag parse(const std::string& text, double beta = 0.0, double nu = 1.0) {
    auto number = [&](std::string_view s) {
      double v = 0.0;
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("bad number '" + std::string(s) + "' in space tag", 1, 1);
      return v;
    };
    SpaceTag t;
    std::string_view s(text);
    if (s == "B") {
      t.family = SpaceFamily::bloch;
    } else if (s == "B0") {
      t.family = SpaceFamily::little_bloch;
    } else if (s.rfind("B^", 0) == 0) {
      t.family = SpaceFamily::bloch_gamma;
      t.gamma = number(s.substr(2));
    } else if (s.rfind("Hinf", 0) == 0) {
      t.family = SpaceFamily::hinf_nu;
      auto rest = s.substr(4);
      if (rest.empty() || rest == "_nu") t.p = nu;
      else if (rest[0] == '_') t.p = number(rest.substr(1));
      else throw ParseError("bad space tag '" + text + "'", 1, 5);
    } else if (!s.empty() && s[0] == 'H') {
      t.family = SpaceFamily::hardy;
      t.p = s == "Hp" ? 2.0 : number(s.substr(1));
    } else if (!s.empty() && s[0] == 'A') {
      t.family = SpaceFamily::bergman;
      auto us = s.find('_');
      t.p = number(s.substr(1, us == std::string_view::npos ? std::string_view::npos : us - 1));
      t.beta = us == std::string_view::npos ? beta : number(s.substr(us + 1));
    } else {
      throw ParseError("unknown space tag '" + text + "'", 1, 1);
    }
    try {
      t.validate();
    } catch (const Error& e) {
      throw ParseError(e.what(), 1, 1);
    }
    return t;
  }
};

enum class ConvergenceMode { none, weak, strong, uniform };

inline const char* to_string(ConvergenceMode m) {
  switch (m) {
    case ConvergenceMode::none: return "none";
    case ConvergenceMode::weak: return "weak";
    case ConvergenceMode::strong: return "strong";
    case ConvergenceMode::uniform: return "uniform";
  }
  return "none";
}

inline ConvergenceMode convergence_mode_from_string(const std::string& s) {
  if (s == "none") return ConvergenceMode::none;
  if (s == "weak") return ConvergenceMode::weak;
  if (s == "strong") return ConvergenceMode::strong;
  if (s == "uniform") return ConvergenceMode::uniform;
  throw ParseError("unknown convergence mode '" + s + "'", 1, 1);
}

struct ClassificationReport {
  std::string space;
  ConvergenceMode mode = ConvergenceMode::none;  // strongest applicable
  bool modes_tabulated = true;                   // false for 𝓑 (isometry rows only)
  bool isometric = false;
  bool similar_to_isometry = false;
  std::string criterion;
  std::map<std::string, double> probes;
  std::vector<std::string> heuristics;  // probe verdicts that are not certificates
  std::vector<std::string> assertions;  // caller-asserted hypotheses
};

struct PowerBoundReport {
  bool bounded = false;
  double sup_norm = 0.0;
  double final_norm = 0.0;
  double half_max = 0.0;
  std::size_t steps = 0;
  std::size_t size = 0;
};

/// sup_n ‖Wⁿ‖ on an N×N Hardy truncation, n ≤ steps. Bounded iff the sup
/// stays ≤ 1e3 and the last norm is within 1.5× the max over the first half.
inline PowerBoundReport power_bound_probe(const std::optional<AnalyticMap>& w, const AnalyticMap& phi,
                                          std::size_t N = 32, std::size_t steps = 500) {
  PowerBoundReport rep;
  rep.steps = steps;
  rep.size = N;
  Eigen::MatrixXcd W = weighted_compose_matrix(w, phi, N).matrix;
  Eigen::MatrixXcd P = W;
  for (std::size_t n = 1; n <= steps; ++n) {
    double nrm = spectral_norm(P);
    if (!std::isfinite(nrm) || nrm > 1e15) {
      rep.sup_norm = std::numeric_limits<double>::infinity();
      rep.final_norm = rep.sup_norm;
      return rep;
    }
    rep.sup_norm = std::max(rep.sup_norm, nrm);
    if (n <= steps / 2) rep.half_max = rep.sup_norm;
    rep.final_norm = nrm;
    P = P * W;
  }
  rep.bounded = rep.sup_norm <= 1e3 && rep.final_norm <= 1.5 * rep.half_max;
  return rep;
}

namespace detail {

inline bool is_rotation(const AnalyticMap& phi) {
  auto m = moebius_fit(phi);
  if (!m) return false;
  auto n = m->normalized();
  return std::abs(n.b()) < 1e-10 && std::abs(n.c()) < 1e-10 && std::abs(std::abs(n.a() / n.d()) - 1.0) < 1e-10;
}

inline bool is_identity_map(const AnalyticMap& phi) {
  for (complex z : disc_sample_grid())
    if (std::abs(phi(z) - z) > 1e-12) return false;
  return true;
}

/// lim_{r→1} max |φ(rξ)| over 512 angles, extrapolated from r = 1 − 2^{−k}.
inline double boundary_sup(const AnalyticMap& phi) {
  RadialLimit lim = radial_limit([&](double r) {
    double best = 0.0;
    for (int j = 0; j < 512; ++j) best = std::max(best, std::abs(phi(std::polar(r, 2.0 * std::numbers::pi * j / 512))));
    return best;
  });
  return lim.divergent ? lim.samples.back() : lim.value;
}

/// Finite order of an elliptic automorphism: smallest n ≤ 1000 with φ′(α)ⁿ = 1.
inline std::optional<int> elliptic_order(complex multiplier) {
  double turns = std::arg(multiplier) / (2.0 * std::numbers::pi);
  for (int n = 1; n <= 1000; ++n) {
    double x = turns * n;
    if (std::abs(x - std::round(x)) < 1e-9) return n;
  }
  return std::nullopt;
}

}  // namespace detail

/// Probes a classification may need; missing ones are computed on demand.
struct DiscreteProbes {
  std::optional<InnerProbeReport> inner;
  std::optional<TauReport> tau;
  bool weight_in_disc_algebra = false;  // caller asserts w ∈ A(𝔻) bounded away from 0
};

/// Isometry and similarity-to-isometry columns.
inline void classify_isometry(const SpaceTag& space, const AnalyticMap& phi, const DWReport& dw,
                              DiscreteProbes& probes, ClassificationReport& rep) {
  bool fixed_interior = dw.kind != DWKind::boundary && std::abs(dw.point) < 1.0;
  bool fixes_zero = std::abs(phi(0.0)) < 1e-12;
  bool elliptic = dw.kind == DWKind::elliptic_automorphism;
  switch (space.family) {
    case SpaceFamily::hardy: {
      if (!probes.inner) probes.inner = inner_probe(phi);
      bool inner = probes.inner->inner;
      rep.probes["inner_defect"] = probes.inner->defect;
      rep.heuristics.push_back("inner_probe");
      rep.isometric = inner && fixes_zero;
      rep.similar_to_isometry = inner && fixed_interior;
      break;
    }
    case SpaceFamily::bloch:
    case SpaceFamily::bloch_gamma:
      if (space.is_bloch()) {
        if (!probes.tau) probes.tau = tau_phi_infty(phi);
        bool tau_one = std::abs(probes.tau->estimate - 1.0) < 1e-3;
        rep.probes["tau_phi_infty"] = probes.tau->estimate;
        rep.heuristics.push_back("tau_phi_infty");
        rep.isometric = fixes_zero && tau_one;
        rep.similar_to_isometry = fixed_interior && tau_one;
        break;
      }
      [[fallthrough]];
    default:
      rep.isometric = detail::is_rotation(phi);
      rep.similar_to_isometry = elliptic;
      break;
  }
}

/// Discrete classification of Cφⁿ (or W_{w,φ}ⁿ when w is given).
inline ClassificationReport classify_discrete(const SpaceTag& space, const AnalyticMap& phi,
                                              const std::optional<AnalyticMap>& w, const DWReport& dw,
                                              DiscreteProbes probes = {}) {
  space.validate();
  ClassificationReport rep;
  rep.space = space.name();
  rep.probes["dw_abs"] = std::abs(dw.point);
  rep.probes["dw_re"] = dw.point.real();
  rep.probes["dw_im"] = dw.point.imag();
  bool interior = std::abs(dw.point) < 1.0 - 1e-8 && dw.kind != DWKind::boundary;
  bool elliptic = dw.kind == DWKind::elliptic_automorphism;

  if (!w) classify_isometry(space, phi, dw, probes, rep);

  if (space.is_bloch()) {
    if (w) throw Error(ErrorCode::unsupported_space, "weighted operators on the Bloch space are not tabulated");
    rep.modes_tabulated = false;
    rep.criterion = "Bloch space: only the isometry rows are tabulated";
    return rep;
  }

  if (!w) {
    if (elliptic) {
      bool id = detail::is_identity_map(phi);
      rep.mode = id ? ConvergenceMode::uniform : ConvergenceMode::none;
      rep.criterion = id ? "identity" : "elliptic automorphism: iterates rotate about the fixed point";
      return rep;
    }
    if (!interior) {
      rep.mode = ConvergenceMode::none;
      rep.criterion = "|alpha| = 1: sup_n ||C^n|| is infinite";
      return rep;
    }
    if (space.family == SpaceFamily::hardy) {
      if (!probes.inner) probes.inner = inner_probe(phi);
      bool inner = probes.inner->inner;
      rep.probes["inner_defect"] = probes.inner->defect;
      rep.mode = inner ? ConvergenceMode::weak : ConvergenceMode::uniform;
      rep.criterion = inner ? "|alpha| < 1, phi inner" : "|alpha| < 1, phi not inner";
    } else {
      rep.mode = ConvergenceMode::uniform;
      rep.criterion = "|alpha| < 1";
    }
    return rep;
  }

  // Weighted case.
  complex wa = (*w)(dw.point);
  rep.probes["abs_w_alpha"] = std::abs(wa);
  if (elliptic) {
    if (!probes.weight_in_disc_algebra)
      throw Error(ErrorCode::missing_assertion,
                  "elliptic symbol: assert that w lies in the disc algebra and is bounded away from 0");
    rep.assertions.push_back("w in A(D), bounded away from 0");
    if (auto order = detail::elliptic_order(dw.multiplier))
      throw Error(ErrorCode::wrong_regime,
                  "elliptic automorphism of finite order " + std::to_string(*order) + " is not covered");
    auto pb = power_bound_probe(w, phi);
    rep.probes["power_sup_norm"] = pb.sup_norm;
    rep.heuristics.push_back("power_bound_probe");
    if (!pb.bounded) {
      rep.mode = ConvergenceMode::none;
      rep.criterion = "iterates not power bounded (probe)";
    } else {
      rep.mode = std::abs(wa) < 1.0 ? ConvergenceMode::uniform : ConvergenceMode::none;
      rep.criterion = std::abs(wa) < 1.0 ? "|w(alpha)| < 1" : "|w(alpha)| >= 1";
    }
    return rep;
  }
  if (!interior) throw Error(ErrorCode::wrong_regime, "weighted classification needs an interior Denjoy-Wolff point");

  const double tol = 1e-9;
  bool weak = false;
  if (std::abs(wa) < 1.0 - tol) {
    weak = true;
    rep.criterion = "|w(alpha)| < 1";
  } else if (std::abs(wa) <= 1.0 + tol) {
    if (space.family != SpaceFamily::hardy || std::abs(space.p - 2.0) > 1e-12)
      throw Error(ErrorCode::unsupported_space, "|w(alpha)| = 1 needs the power-bound probe, available on H2 only");
    auto pb = power_bound_probe(w, phi);
    rep.probes["power_sup_norm"] = pb.sup_norm;
    rep.heuristics.push_back("power_bound_probe");
    weak = pb.bounded;
    rep.criterion = weak ? "|w(alpha)| = 1, power bounded (probe)" : "|w(alpha)| = 1, not power bounded (probe)";
  } else {
    rep.criterion = "|w(alpha)| > 1";
  }
  if (!weak) {
    rep.mode = ConvergenceMode::none;
    return rep;
  }
  // Uniform iff r_e < 1; ‖φ‖∞ < 1 makes W compact, so r_e = 0.
  double sup = detail::boundary_sup(phi);
  rep.probes["phi_sup_norm"] = sup;
  if (sup < 1.0 - 1e-6) {
    rep.mode = ConvergenceMode::uniform;
    rep.criterion += "; ||phi||_inf < 1 so r_e = 0";
  } else {
    rep.mode = ConvergenceMode::weak;
    rep.criterion += "; r_e < 1 not established";
  }
  return rep;
}

inline ClassificationReport classify_discrete(const SpaceTag& space, const AnalyticMap& phi,
                                              const std::optional<AnalyticMap>& w = std::nullopt,
                                              DiscreteProbes probes = {}) {
  return classify_discrete(space, phi, w, denjoy_wolff(phi), probes);
}

struct SemigroupLimitReport {
  bool converges = false;
  std::optional<complex> zero;
  std::optional<double> witness_angle;
  double witness_value = 0.0;  // extrapolated limsup at the witness
  double max_boundary_value = -std::numeric_limits<double>::infinity();
};

/// Uniform (= strong) convergence of the semigroup: G has a zero in 𝔻 and
/// some boundary limsup of Re(z̄G) is negative.
inline SemigroupLimitReport classify_semigroup_limit(const AnalyticMap& G) {
  SemigroupLimitReport rep;
  for (int i = 0; i < 32 && !rep.zero; ++i) {
    double r = 0.1 + 0.25 * (i / 8);
    complex z = std::polar(r, 2.0 * std::numbers::pi * (i % 8) / 8.0);
    for (int it = 0; it < 100; ++it) {
      Jet j = G.jet(z);
      if (!detail::finite(j.value) || !detail::finite(j.derivative) || j.derivative == 0.0) break;
      complex step = j.value / j.derivative;
      z -= step;
      if (!(std::abs(z) < 1.0)) break;
      if (std::abs(step) < 1e-13) {
        if (std::abs(G(z)) < 1e-10 && std::abs(z) < 1.0 - 1e-6) rep.zero = z;
        break;
      }
    }
  }
  const int n = 256;
  std::vector<RadialLimit> lims(n);
  parallel_for(n, [&](std::size_t j) {
    complex xi = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / n);
    lims[j] = radial_limit([&](double r) {
      complex z = r * xi;
      complex v = G(z);
      return detail::finite(v) ? (std::conj(z) * v).real() : std::numeric_limits<double>::infinity();
    });
  });
  for (int j = 0; j < n; ++j) {
    double v = lims[j].value;
    if (std::isnan(v)) continue;
    rep.max_boundary_value = std::max(rep.max_boundary_value, v);
    if (v < -1e-6 && (!rep.witness_angle || v < rep.witness_value)) {
      rep.witness_angle = 2.0 * std::numbers::pi * j / n;
      rep.witness_value = v;
    }
  }
  rep.converges = rep.zero.has_value() && rep.witness_angle.has_value();
  return rep;
}

}  // namespace holoflow
