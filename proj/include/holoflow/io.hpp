#pragma once

// JSON for specs and reports, CSV for series and matrices.
// Complex numbers are [re, im]; non-finite reals are "+inf", "-inf", "nan".

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "holoflow/classify.hpp"
#include "holoflow/compactness.hpp"
#include "holoflow/dynamics.hpp"
#include "holoflow/error.hpp"
#include "holoflow/fock.hpp"
#include "holoflow/halfplane.hpp"
#include "holoflow/operator.hpp"
#include "holoflow/semiflow.hpp"

namespace holoflow {

using json = nlohmann::json;

namespace io {

inline json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline double real(const json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParseError("bad real '" + s + "'", 1, 1);
  }
  if (!j.is_number()) throw ParseError("expected a number, got " + j.dump(), 1, 1);
  return j.get<double>();
}

inline json cx(complex z) { return json::array({real(z.real()), real(z.imag())}); }

inline complex cx(const json& j) {
  if (j.is_number() || j.is_string()) return {real(j), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [re, im], got " + j.dump(), 1, 1);
  return {real(j[0]), real(j[1])};
}

template <class T>
std::optional<T> opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if constexpr (std::is_same_v<T, complex>) return cx(j[key]);
  else if constexpr (std::is_same_v<T, double>) return real(j[key]);
  else return j[key].get<T>();
}

inline const json& at(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing key '") + key + "'", 1, 1);
  return j[key];
}

}  // namespace io

// ---- semiflow specs -------------------------------------------------------

inline json to_json(const FlowSpec& s) {
  json p;
  switch (s.variant) {
    case FlowVariant::elliptic: p = {{"alpha", io::cx(s.alpha)}, {"w", s.w}}; break;
    case FlowVariant::hyperbolic: p = {{"alpha1", io::cx(s.alpha)}, {"alpha2", io::cx(s.alpha2)}, {"c", s.c}}; break;
    case FlowVariant::parabolic: p = {{"alpha", io::cx(s.alpha)}, {"w", s.w}}; break;
  }
  return {{"version", 1}, {"variant", to_string(s.variant)}, {"params", p}};
}

struct GeneratorSpec {
  AnalyticMap G;
};

using SemiflowSpec = std::variant<FlowSpec, GeneratorSpec>;

inline json to_json(const GeneratorSpec& g) {
  return {{"version", 1}, {"generator", g.G.to_string()}, {"domain", to_string(g.G.domain())}};
}

/// {"variant": ..., "params": {...}} or {"generator": "<expr>"}.
inline SemiflowSpec semiflow_spec_from_json(const json& j) {
  if (j.contains("version") && j["version"] != 1) throw ParseError("unsupported spec version " + j["version"].dump(), 1, 1);
  if (j.contains("generator")) {
    Domain d = j.contains("domain") ? domain_from_string(j["domain"].get<std::string>()) : Domain::disc;
    return GeneratorSpec{AnalyticMap::parse(j["generator"].get<std::string>(), d)};
  }
  auto v = io::at(j, "variant").get<std::string>();
  const json& p = io::at(j, "params");
  if (v == "elliptic") return FlowSpec::elliptic(io::cx(io::at(p, "alpha")), io::real(io::at(p, "w")));
  if (v == "hyperbolic")
    return FlowSpec::hyperbolic(io::cx(io::at(p, "alpha1")), io::cx(io::at(p, "alpha2")), io::real(io::at(p, "c")));
  if (v == "parabolic") return FlowSpec::parabolic(io::cx(io::at(p, "alpha")), io::real(io::at(p, "w")));
  throw ParseError("unknown semiflow variant '" + v + "'", 1, 1);
}

inline FlowSpec flow_spec_from_json(const json& j) {
  auto s = semiflow_spec_from_json(j);
  if (auto f = std::get_if<FlowSpec>(&s)) return *f;
  throw ParseError("expected a closed-form semiflow spec", 1, 1);
}

// ---- dynamics -------------------------------------------------------------

inline json to_json(const DWReport& r) {
  return {{"point", io::cx(r.point)},
          {"kind", to_string(r.kind)},
          {"multiplier", io::cx(r.multiplier)},
          {"iterations", r.iterations},
          {"method", r.method}};
}

inline DWReport dw_report_from_json(const json& j) {
  DWReport r;
  r.point = io::cx(io::at(j, "point"));
  auto k = io::at(j, "kind").get<std::string>();
  if (k == "interior") r.kind = DWKind::interior;
  else if (k == "boundary") r.kind = DWKind::boundary;
  else if (k == "elliptic_automorphism") r.kind = DWKind::elliptic_automorphism;
  else throw ParseError("unknown DW kind '" + k + "'", 1, 1);
  r.multiplier = io::cx(io::at(j, "multiplier"));
  r.iterations = io::at(j, "iterations").get<std::size_t>();
  r.method = io::at(j, "method").get<std::string>();
  return r;
}

// ---- classification -------------------------------------------------------

inline json to_json(const ClassificationReport& r) {
  json probes = json::object();
  for (const auto& [k, v] : r.probes) probes[k] = io::real(v);
  return {{"space", r.space},
          {"mode", to_string(r.mode)},
          {"modes_tabulated", r.modes_tabulated},
          {"isometric", r.isometric},
          {"similar_to_isometry", r.similar_to_isometry},
          {"criterion", r.criterion},
          {"probes", probes},
          {"heuristics", r.heuristics},
          {"assertions", r.assertions}};
}

inline ClassificationReport classification_from_json(const json& j) {
  ClassificationReport r;
  r.space = io::at(j, "space").get<std::string>();
  r.mode = convergence_mode_from_string(io::at(j, "mode").get<std::string>());
  r.modes_tabulated = io::at(j, "modes_tabulated").get<bool>();
  r.isometric = io::at(j, "isometric").get<bool>();
  r.similar_to_isometry = io::at(j, "similar_to_isometry").get<bool>();
  r.criterion = io::at(j, "criterion").get<std::string>();
  for (const auto& [k, v] : io::at(j, "probes").items()) r.probes[k] = io::real(v);
  r.heuristics = io::at(j, "heuristics").get<std::vector<std::string>>();
  r.assertions = io::at(j, "assertions").get<std::vector<std::string>>();
  return r;
}

inline json to_json(const SemigroupLimitReport& r) {
  return {{"converges", r.converges},
          {"zero", r.zero ? io::cx(*r.zero) : json()},
          {"witness_angle", r.witness_angle ? io::real(*r.witness_angle) : json()},
          {"witness_value", io::real(r.witness_value)},
          {"max_boundary_value", io::real(r.max_boundary_value)}};
}

inline SemigroupLimitReport semigroup_limit_from_json(const json& j) {
  SemigroupLimitReport r;
  r.converges = io::at(j, "converges").get<bool>();
  r.zero = io::opt<complex>(j, "zero");
  r.witness_angle = io::opt<double>(j, "witness_angle");
  r.witness_value = io::real(io::at(j, "witness_value"));
  r.max_boundary_value = io::real(io::at(j, "max_boundary_value"));
  return r;
}

// ---- compactness / analyticity --------------------------------------------

inline json to_json(const RadialCurve& c) {
  json vals = json::array();
  for (double v : c.values) vals.push_back(io::real(v));
  return {{"angle", c.angle}, {"radii", c.radii}, {"values", vals}, {"limit", io::real(c.limit)}, {"infinite", c.infinite}};
}

inline RadialCurve radial_curve_from_json(const json& j) {
  RadialCurve c;
  c.angle = io::real(io::at(j, "angle"));
  c.radii = io::at(j, "radii").get<std::vector<double>>();
  for (const auto& v : io::at(j, "values")) c.values.push_back(io::real(v));
  c.limit = io::real(io::at(j, "limit"));
  c.infinite = io::at(j, "infinite").get<bool>();
  return c;
}

inline json to_json(const CompactnessReport& r) {
  json curves = json::array();
  for (const auto& c : r.curves) curves.push_back(to_json(c));
  return {{"curves", curves},
          {"immediately_compact", r.immediately_compact},
          {"finite_count", r.finite_count},
          {"min_finite_limit", io::real(r.min_finite_limit)},
          {"min_finite_angle", r.min_finite_angle}};
}

inline CompactnessReport compactness_from_json(const json& j) {
  CompactnessReport r;
  for (const auto& c : io::at(j, "curves")) r.curves.push_back(radial_curve_from_json(c));
  r.immediately_compact = io::at(j, "immediately_compact").get<bool>();
  r.finite_count = io::at(j, "finite_count").get<int>();
  r.min_finite_limit = io::real(io::at(j, "min_finite_limit"));
  r.min_finite_angle = io::real(io::at(j, "min_finite_angle"));
  return r;
}

inline json to_json(const AnalyticityReport& r) {
  json worst = json::array();
  for (double v : r.worst) worst.push_back(io::real(v));
  return {{"theta", r.theta}, {"steps", r.steps}, {"analytic", r.analytic}, {"worst", worst}};
}

inline AnalyticityReport analyticity_from_json(const json& j) {
  AnalyticityReport r;
  r.theta = io::real(io::at(j, "theta"));
  r.steps = io::at(j, "steps").get<int>();
  r.analytic = io::at(j, "analytic").get<bool>();
  for (const auto& v : io::at(j, "worst")) r.worst.push_back(io::real(v));
  return r;
}

// ---- half-plane -----------------------------------------------------------

inline json to_json(const AngularDerivativeReport& r) {
  json rays = json::array();
  for (complex v : r.rays) rays.push_back(io::cx(v));
  return {{"lambda", io::real(r.lambda)}, {"bounded", r.bounded}, {"determined", r.determined},
          {"norm", io::real(r.norm)},     {"rays", rays}};
}

inline AngularDerivativeReport angular_derivative_from_json(const json& j) {
  AngularDerivativeReport r;
  r.lambda = io::real(io::at(j, "lambda"));
  r.bounded = io::at(j, "bounded").get<bool>();
  r.determined = io::at(j, "determined").get<bool>();
  r.norm = io::real(io::at(j, "norm"));
  const json& rays = io::at(j, "rays");
  for (std::size_t i = 0; i < r.rays.size() && i < rays.size(); ++i) r.rays[i] = io::cx(rays[i]);
  return r;
}

inline json to_json(const ArvanitidisReport& r) {
  json rays = json::array();
  for (complex v : r.rays) rays.push_back(io::cx(v));
  return {{"delta", io::real(r.delta)},
          {"determined", r.determined},
          {"quasicontractive", r.quasicontractive},
          {"rays", rays}};
}

inline json to_json(const QuasicontractiveReport& r) {
  json mins = json::array();
  for (double v : r.grid_minima) mins.push_back(io::real(v));
  return {{"inf_estimate", io::real(r.inf_estimate)},
          {"divergent", r.divergent},
          {"necessary_ok", r.necessary_ok},
          {"label", "necessary condition"},
          {"contractive_candidate", r.contractive_candidate},
          {"grid_minima", mins},
          {"argmin", io::cx(r.argmin)}};
}

inline json to_json(const HalfplaneGeneratorReport& r) {
  json over = json::array();
  for (complex z : r.overflow_points) over.push_back(io::cx(z));
  return {{"pass", r.pass},
          {"max_violation", io::real(r.max_violation)},
          {"worst_point", io::cx(r.worst_point)},
          {"overflow_points", over}};
}

// ---- Fock -----------------------------------------------------------------

inline json to_json(const FockSymbol& s) { return {{"a", io::cx(s.a)}, {"b", io::cx(s.b)}}; }

inline FockSymbol fock_symbol_from_json(const json& j) { return {io::cx(io::at(j, "a")), io::cx(io::at(j, "b"))}; }

inline json to_json(const FockWeight& w) {
  if (w.is_exp_quadratic()) {
    const auto& e = w.quadratic();
    return {{"form", "exp_quadratic"}, {"p", io::cx(e.p)}, {"q", io::cx(e.q)}, {"r", io::cx(e.r)}};
  }
  const auto& m = std::get<AnalyticMap>(w.form);
  return {{"form", "general"}, {"w", m.to_string()}};
}

inline FockWeight fock_weight_from_json(const json& j) {
  auto form = io::at(j, "form").get<std::string>();
  if (form == "exp_quadratic")
    return FockWeight::exp_quadratic(io::cx(io::at(j, "p")), io::cx(io::at(j, "q")), io::cx(io::at(j, "r")));
  if (form == "general") return FockWeight::general(AnalyticMap::parse(io::at(j, "w").get<std::string>(), Domain::plane));
  throw ParseError("unknown weight form '" + form + "'", 1, 1);
}

inline json to_json(const FockSemigroupSpec& s) {
  return {{"lambda", io::cx(s.lambda)}, {"C", io::cx(s.C)}, {"mu", io::cx(s.mu)}, {"case", to_string(s.kind)}};
}

inline FockSemigroupSpec fock_semigroup_spec_from_json(const json& j) {
  FockSemigroupSpec s;
  s.lambda = io::cx(io::at(j, "lambda"));
  s.C = io::cx(io::at(j, "C"));
  s.mu = j.contains("mu") ? io::cx(j["mu"]) : complex(0.0);
  auto c = io::at(j, "case").get<std::string>();
  if (c == "dissipative") s.kind = FockCase::dissipative;
  else if (c == "rotational") s.kind = FockCase::rotational;
  else throw ParseError("unknown Fock semigroup case '" + c + "'", 1, 1);
  s.validate();
  return s;
}

inline json to_json(const FockClassification& c) {
  return {{"bounded", c.bounded}, {"compact", c.compact}, {"norm", io::real(c.norm)}, {"basis_norm", io::real(c.basis_norm)}};
}

inline FockClassification fock_classification_from_json(const json& j) {
  FockClassification c;
  c.bounded = io::at(j, "bounded").get<bool>();
  c.compact = io::at(j, "compact").get<bool>();
  c.norm = io::real(io::at(j, "norm"));
  c.basis_norm = io::real(io::at(j, "basis_norm"));
  return c;
}

inline json to_json(const FockWeightedReport& r) {
  json j = {{"bounded", r.bounded},
            {"M", io::real(r.M)},
            {"log_M", io::real(r.log_M)},
            {"in_space", r.in_space},
            {"disagreement", r.disagreement},
            {"explanation", r.explanation},
            {"heuristic", r.heuristic}};
  j["compact"] = r.compact ? json(*r.compact) : json();
  j["theorem"] = r.theorem ? json(to_string(*r.theorem)) : json();
  j["exact"] = r.exact ? json(to_string(*r.exact)) : json();
  j["template_match"] = r.template_match ? json(*r.template_match) : json();
  return j;
}

inline FockWeightedReport fock_weighted_from_json(const json& j) {
  auto wcase = [](const json& v) -> std::optional<FockWeightCase> {
    if (v.is_null()) return std::nullopt;
    auto s = v.get<std::string>();
    if (s == "compact") return FockWeightCase::compact;
    if (s == "bounded") return FockWeightCase::bounded;
    if (s == "unbounded") return FockWeightCase::unbounded;
    throw ParseError("unknown weight case '" + s + "'", 1, 1);
  };
  FockWeightedReport r;
  r.bounded = io::at(j, "bounded").get<bool>();
  r.M = io::real(io::at(j, "M"));
  r.log_M = io::real(io::at(j, "log_M"));
  r.in_space = io::at(j, "in_space").get<bool>();
  r.disagreement = io::at(j, "disagreement").get<bool>();
  r.explanation = io::at(j, "explanation").get<std::string>();
  r.heuristic = io::at(j, "heuristic").get<bool>();
  r.compact = io::opt<bool>(j, "compact");
  r.theorem = wcase(io::at(j, "theorem"));
  r.exact = wcase(io::at(j, "exact"));
  r.template_match = io::opt<bool>(j, "template_match");
  return r;
}

// ---- CSV ------------------------------------------------------------------

namespace io {

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace io

/// Header row plus rows of reals, 17 significant digits.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << io::fmt17(r[i]);
    os << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(is, line)) throw ParseError("empty CSV", 1, 1);
  t.header = split(line);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    int col = 1;
    for (const auto& c : split(line)) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw ParseError("bad CSV cell '" + c + "'", lineno, col);
      }
      col += static_cast<int>(c.size()) + 1;
    }
    if (row.size() != t.header.size()) throw ParseError("CSV row has the wrong width", lineno, 1);
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Row-major matrix; column j becomes c<j>_re, c<j>_im.
inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    header.push_back("c" + std::to_string(j) + "_re");
    header.push_back("c" + std::to_string(j) + "_im");
  }
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      r.push_back(m(i, j).imag());
    }
    rows.push_back(std::move(r));
  }
  write_csv(os, header, rows);
}

inline Eigen::MatrixXcd read_matrix_csv(std::istream& is) {
  auto t = read_csv(is);
  if (t.header.size() % 2) throw ParseError("matrix CSV needs re,im column pairs", 1, 1);
  Eigen::MatrixXcd m(t.rows.size(), t.header.size() / 2);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size() / 2; ++j) m(i, j) = {t.rows[i][2 * j], t.rows[i][2 * j + 1]};
  return m;
}

}  // namespace holoflow
