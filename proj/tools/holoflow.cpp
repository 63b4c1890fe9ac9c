// holoflow: batch front end for the semiflow / composition-operator toolkit.
//
//   holoflow classify   --space H2 --phi "z^2"
//   holoflow classify   --generator "-(z)" --continuous
//   holoflow classify   --fock --a 1 --b 1
//   holoflow experiment trajectory --generator "(1-z)^2" --tgrid 0:2:21
//   holoflow report     --spec flow.json
//
// Exit codes: 0 ok, 1 parse/usage error, 2 domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "holoflow/holoflow.hpp"

using namespace holoflow;

namespace {

struct Options {
  std::string space = "H2";
  std::string phi, w, generator, g, spec, wq;
  bool continuous = false, compactness = false, analyticity = false;
  bool fock = false, halfplane = false, assert_disc_algebra = false;
  std::string a = "1", b = "0", z0 = "0";
  std::size_t N = 32;
  std::size_t nmax = 60;
  int angles = 64;
  double tol = 1e-10;
  double beta = 1.0, nu = 2.0;
  std::string tgrid = "0:1:11";
  std::string out;
};

complex parse_complex(const std::string& s) {
  auto m = AnalyticMap::parse(s, Domain::plane);
  if (!m.is_constant()) throw ParseError("expected a constant, got '" + s + "'", 1, 1);
  return m(0.0);
}

std::vector<complex> parse_complex_list(const std::string& s) {
  std::vector<complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  return out;
}

// "a:b:n" (n points, endpoints included) or "t0,t1,...".
std::vector<double> parse_tgrid(const std::string& s) {
  auto num = [&](const std::string& x, int col) {
    try {
      std::size_t used = 0;
      double v = std::stod(x, &used);
      if (used != x.size()) throw std::invalid_argument(x);
      return v;
    } catch (const std::exception&) {
      throw ParseError("bad number '" + x + "' in --tgrid", 1, col);
    }
  };
  std::vector<double> ts;
  if (s.find(':') != std::string::npos) {
    auto p1 = s.find(':'), p2 = s.find(':', p1 + 1);
    if (p2 == std::string::npos) throw ParseError("--tgrid needs a:b:n", 1, static_cast<int>(s.size()) + 1);
    double a = num(s.substr(0, p1), 1);
    double b = num(s.substr(p1 + 1, p2 - p1 - 1), static_cast<int>(p1) + 2);
    double nd = num(s.substr(p2 + 1), static_cast<int>(p2) + 2);
    int n = static_cast<int>(nd);
    if (n < 1 || nd != n) throw ParseError("--tgrid point count must be a positive integer", 1, static_cast<int>(p2) + 2);
    for (int k = 0; k < n; ++k) ts.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  } else {
    std::stringstream ss(s);
    std::string item;
    int col = 1;
    while (std::getline(ss, item, ',')) {
      ts.push_back(num(item, col));
      col += static_cast<int>(item.size()) + 1;
    }
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] >= 0.0)) throw Error(ErrorCode::parameter_domain, "times must be >= 0");
    if (i && ts[i] < ts[i - 1]) throw Error(ErrorCode::parameter_domain, "times must be nondecreasing");
  }
  if (ts.empty()) throw ParseError("empty --tgrid", 1, 1);
  return ts;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 1, 1);
  return json::parse(in);
}

// Generator from --generator, or from a semiflow spec file.
struct GeneratorInput {
  AnalyticMap G;
  std::optional<FlowSpec> flow;
  json echo;
};

std::optional<GeneratorInput> generator_input(const Options& o, Domain d = Domain::disc) {
  if (!o.spec.empty()) {
    auto s = semiflow_spec_from_json(read_json_file(o.spec));
    if (auto f = std::get_if<FlowSpec>(&s)) return GeneratorInput{f->generator(), *f, to_json(*f)};
    const auto& gs = std::get<GeneratorSpec>(s);
    return GeneratorInput{gs.G.with_domain(d), std::nullopt, to_json(gs)};
  }
  if (!o.generator.empty()) {
    auto G = AnalyticMap::parse(o.generator, d);
    return GeneratorInput{G, std::nullopt, {{"generator", o.generator}}};
  }
  return std::nullopt;
}

AnalyticMap need(const std::string& text, const char* flag, Domain d = Domain::disc) {
  if (text.empty()) throw ParseError(std::string("missing ") + flag, 1, 1);
  return AnalyticMap::parse(text, d);
}

FockWeight fock_weight(const Options& o) {
  if (!o.wq.empty()) {
    auto c = parse_complex_list(o.wq);
    if (c.size() != 3) throw ParseError("--wq needs p,q,r", 1, 1);
    return FockWeight::exp_quadratic(c[0], c[1], c[2]);
  }
  return FockWeight::general(AnalyticMap::parse(o.w, Domain::plane));
}

json generator_check_json(const GeneratorCheckReport& r) {
  return {{"pass", r.pass()},
          {"interior_ok", r.interior_ok},
          {"boundary_ok", r.boundary_ok},
          {"worst_interior_point", io::cx(r.worst_interior_point)},
          {"worst_interior_value", io::real(r.worst_interior_value)},
          {"worst_boundary_angle", r.worst_boundary_angle},
          {"worst_boundary_value", io::real(r.worst_boundary_value)}};
}

json bp_json(const BerksonPortaReport& r) {
  return {{"alpha", io::cx(r.alpha)},
          {"min_re_F", io::real(r.min_re_F)},
          {"argmin", io::cx(r.argmin)},
          {"skipped", r.skipped},
          {"pass", r.pass}};
}

json trend_json(const DissipativityTrend& tr) {
  json j = json::array();
  for (std::size_t i = 0; i < tr.sizes.size(); ++i) j.push_back({{"N", tr.sizes[i]}, {"omega", io::real(tr.omegas[i])}});
  return j;
}

// ---- classify ---------------------------------------------------------------

json classify_fock(const Options& o) {
  FockSymbol s{parse_complex(o.a), parse_complex(o.b)};
  json rep{{"symbol", to_json(s)}, {"nu", o.nu}};
  auto cls = fock_classify_symbol(s, o.nu);
  rep["classification"] = to_json(cls);
  rep["bounded"] = cls.bounded;
  if (!o.w.empty() || !o.wq.empty()) {
    auto w = fock_weight(o);
    rep["weight"] = to_json(w);
    auto wr = fock_weighted_bounded(w, s, o.nu, o.beta);
    rep["weighted"] = to_json(wr);
    rep["bounded"] = wr.bounded;
  }
  auto gen = classify_fock_generator(s.a, s.b);
  rep["as_generator"] = {{"valid", gen.valid}, {"criterion_valid", gen.criterion_valid}, {"agrees", gen.agrees}};
  return rep;
}

json classify_halfplane(const Options& o) {
  json rep;
  if (!o.phi.empty()) {
    auto psi = need(o.phi, "--phi", Domain::halfplane);
    auto ad = angular_derivative_at_infinity(psi);
    rep["angular_derivative"] = to_json(ad);
    rep["norm"] = io::real(std::sqrt(ad.lambda));
  }
  if (auto gi = generator_input(o, Domain::halfplane)) {
    rep["generator_check"] = to_json(halfplane_generator_check(gi->G));
    rep["arvanitidis"] = to_json(arvanitidis_delta(gi->G));
    rep["quasicontractive"] = to_json(quasicontractive_necessary(gi->G));
  }
  if (rep.is_null()) throw ParseError("--halfplane needs --phi or --generator", 1, 1);
  return rep;
}

json classify_disc(const Options& o) {
  json rep;
  if (!o.phi.empty()) {
    auto phi = need(o.phi, "--phi");
    std::optional<AnalyticMap> w;
    if (!o.w.empty()) w = AnalyticMap::parse(o.w);
    DiscreteProbes probes;
    probes.weight_in_disc_algebra = o.assert_disc_algebra;
    auto space = SpaceTag::parse(o.space);
    auto dw = denjoy_wolff(phi);
    rep["denjoy_wolff"] = to_json(dw);
    rep["discrete"] = to_json(classify_discrete(space, phi, w, dw, probes));
  }
  auto gi = generator_input(o);
  if (gi) {
    rep["semiflow"] = gi->echo;
    if (o.continuous) rep["continuous"] = to_json(classify_semigroup_limit(gi->G));
    if (o.compactness) rep["compactness"] = to_json(compactness_criterion(gi->G, o.angles));
    if (o.analyticity) rep["analyticity"] = to_json(analyticity_probe(gi->G));
    if (!o.g.empty()) {
      auto g = AnalyticMap::parse(o.g);
      rep["dissipativity"] = trend_json(dissipativity_trend(gi->G, g, {o.N / 2, o.N, 2 * o.N}));
    }
    if (!o.continuous && !o.compactness && !o.analyticity && o.g.empty())
      rep["continuous"] = to_json(classify_semigroup_limit(gi->G));
  }
  if (rep.is_null()) throw ParseError("classify needs --phi, --generator, --spec, --fock or --halfplane", 1, 1);
  return rep;
}

json cmd_classify(const Options& o) {
  json rep{{"command", "classify"}};
  if (o.fock) {
    rep["fock"] = classify_fock(o);
  } else if (o.halfplane) {
    rep["halfplane"] = classify_halfplane(o);
  } else {
    rep.update(classify_disc(o));
  }
  return rep;
}

// ---- experiment ---------------------------------------------------------------

using Rows = std::vector<std::vector<double>>;

struct Table {
  std::vector<std::string> header;
  Rows rows;
};

Table exp_trajectory(const Options& o) {
  auto gi = generator_input(o);
  if (!gi) throw ParseError("trajectory needs --generator or --spec", 1, 1);
  complex z = parse_complex(o.z0);
  auto ts = parse_tgrid(o.tgrid);
  Table t{{"t", "re", "im"}, {}};
  std::vector<complex> vals;
  if (gi->flow) {
    for (double s : ts) vals.push_back(make_flow(*gi->flow, s, z));
  } else {
    ODEConfig cfg;
    cfg.rtol = o.tol;
    cfg.atol = o.tol * 1e-2;
    vals = integrate_trajectory(gi->G, z, ts, cfg, gi->G.domain());
  }
  if (!o.g.empty()) {
    t.header.insert(t.header.end(), {"w_re", "w_im"});
    auto g = AnalyticMap::parse(o.g);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      complex wt = weighted_cocycle(gi->G, g, ts[i], z);
      t.rows.push_back({ts[i], vals[i].real(), vals[i].imag(), wt.real(), wt.imag()});
    }
  } else {
    for (std::size_t i = 0; i < ts.size(); ++i) t.rows.push_back({ts[i], vals[i].real(), vals[i].imag()});
  }
  return t;
}

// ‖Tⁿ − P‖₂ for n = 1..nmax, P the expected rank-one limit.
Table exp_iterate_decay(const Options& o) {
  Eigen::MatrixXcd T, P;
  if (o.fock) {
    FockSymbol s{parse_complex(o.a), parse_complex(o.b)};
    auto it = fock_iterate(s, 1);
    if (!it.limit_point)
      throw Error(ErrorCode::wrong_regime, "iterate-decay needs |a| < 1 (no limit point)");
    std::optional<FockWeight> w;
    if (!o.w.empty() || !o.wq.empty()) w = fock_weight(o);
    if (w) throw Error(ErrorCode::wrong_regime, "iterate-decay for weighted Fock operators is not supported");
    T = fock_matrix(std::nullopt, s, o.N).matrix;
    P = fock_evaluation_matrix(*it.limit_point, o.N);
  } else {
    auto phi = need(o.phi, "--phi");
    auto dw = denjoy_wolff(phi);
    if (dw.kind != DWKind::interior) throw Error(ErrorCode::wrong_regime, "iterate-decay needs an interior Denjoy-Wolff point");
    T = weighted_compose_matrix(std::nullopt, phi, o.N).matrix;
    P = Eigen::MatrixXcd::Zero(o.N, o.N);
    complex p = 1.0;
    for (std::size_t n = 0; n < o.N; ++n, p *= dw.point) P(0, n) = p;
  }
  Table t{{"n", "norm"}, {}};
  Eigen::MatrixXcd Tn = T;
  for (std::size_t n = 1; n <= o.nmax; ++n) {
    t.rows.push_back({static_cast<double>(n), spectral_norm(Tn - P)});
    Tn = Tn * T;
  }
  return t;
}

Table exp_supnorm(const Options& o) {
  auto gi = generator_input(o);
  if (!gi) throw ParseError("supnorm needs --generator or --spec", 1, 1);
  auto ts = parse_tgrid(o.tgrid);
  SupnormScan scan;
  if (gi->flow) {
    auto f = *gi->flow;
    scan = supnorm_scan([&](double t, complex z) { return make_flow(f, t, z); }, ts);
  } else {
    ODEConfig cfg;
    cfg.rtol = o.tol;
    cfg.atol = o.tol * 1e-2;
    scan = supnorm_scan(ode_flow(gi->G, cfg), ts);
  }
  Table t{{"t", "supnorm", "argmax_angle"}, {}};
  for (const auto& p : scan.points) t.rows.push_back({p.t, p.estimate, p.argmax_angle});
  return t;
}

Table exp_radial(const Options& o) {
  auto gi = generator_input(o);
  if (!gi) throw ParseError("radial needs --generator or --spec", 1, 1);
  auto rep = compactness_criterion(gi->G, o.angles);
  Table t{{"angle", "r", "value"}, {}};
  for (const auto& c : rep.curves)
    for (std::size_t i = 0; i < c.radii.size(); ++i) t.rows.push_back({c.angle, c.radii[i], c.values[i]});
  return t;
}

// ---- report -------------------------------------------------------------------

json cmd_report(const Options& o) {
  auto gi = generator_input(o);
  if (!gi) throw ParseError("report needs --spec or --generator", 1, 1);
  json rep{{"command", "report"}, {"semiflow", gi->echo}};
  rep["generator_check"] = generator_check_json(generator_check(gi->G));
  auto lim = classify_semigroup_limit(gi->G);
  rep["continuous"] = to_json(lim);
  std::optional<complex> alpha;
  if (gi->flow) alpha = gi->flow->attracting_point();
  else if (lim.zero) alpha = lim.zero;
  if (alpha) rep["berkson_porta"] = bp_json(berkson_porta_factor(gi->G, *alpha));
  auto cmp = compactness_criterion(gi->G, o.angles);
  rep["compactness"] = {{"immediately_compact", cmp.immediately_compact},
                        {"finite_count", cmp.finite_count},
                        {"min_finite_limit", io::real(cmp.min_finite_limit)}};
  rep["analyticity"] = to_json(analyticity_probe(gi->G));
  AnalyticMap g = o.g.empty() ? AnalyticMap::constant(0.0) : AnalyticMap::parse(o.g);
  rep["dissipativity"] = trend_json(dissipativity_trend(gi->G, g, {o.N / 2, o.N, 2 * o.N}));
  return rep;
}

// ---- output -------------------------------------------------------------------

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + o.out + "'", 1, 1);
  f << text;
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump(2) + "\n"); }

void emit_table(const Options& o, const Table& t) {
  std::ostringstream os;
  write_csv(os, t.header, t.rows);
  emit(o, os.str());
}

void add_common(CLI::App* c, Options& o) {
  c->add_option("--space", o.space, "space tag (H2, H<p>, A<p>_<beta>, B, B0, B^<gamma>, Hinf_<p>)");
  c->add_option("--phi", o.phi, "symbol expression");
  c->add_option("--w", o.w, "weight expression");
  c->add_option("--wq", o.wq, "Fock exp-quadratic weight p,q,r");
  c->add_option("--generator", o.generator, "semiflow generator expression");
  c->add_option("--g", o.g, "cocycle generator term");
  c->add_option("--spec", o.spec, "semiflow spec JSON file")->check(CLI::ExistingFile);
  c->add_flag("--fock", o.fock, "Fock space symbol az+b");
  c->add_option("--a", o.a, "Fock coefficient a");
  c->add_option("--b", o.b, "Fock coefficient b");
  c->add_option("--nu", o.nu, "Fock parameter nu")->check(CLI::PositiveNumber);
  c->add_option("--beta", o.beta, "scale in the exp-quadratic test")->check(CLI::PositiveNumber);
  c->add_flag("--halfplane", o.halfplane, "right half-plane symbol / generator");
  c->add_option("--N", o.N, "matrix truncation")->check(CLI::Range(2, 170));
  c->add_option("--tol", o.tol, "ODE relative tolerance")->check(CLI::Range(1e-14, 1e-3));
  c->add_option("--angles", o.angles, "boundary angles")->check(CLI::Range(1, 4096));
  c->add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holoflow: semiflows and composition operators"};
  app.require_subcommand(1);
  Options o;

  auto* classify = app.add_subcommand("classify", "classify a symbol, semiflow or Fock operator");
  add_common(classify, o);
  classify->add_flag("--continuous", o.continuous, "uniform convergence of the semigroup");
  classify->add_flag("--compactness", o.compactness, "radial compactness criterion");
  classify->add_flag("--analyticity", o.analyticity, "analytic extension probe");
  classify->add_flag("--assert-disc-algebra", o.assert_disc_algebra, "assert w in A(D), bounded away from 0");

  std::string kind;
  auto* experiment = app.add_subcommand("experiment", "CSV series");
  add_common(experiment, o);
  experiment->add_option("kind", kind, "trajectory | iterate-decay | supnorm | radial")
      ->required()
      ->check(CLI::IsMember({"trajectory", "iterate-decay", "supnorm", "radial"}));
  experiment->add_option("--tgrid", o.tgrid, "a:b:n or t0,t1,...");
  experiment->add_option("--z0", o.z0, "start point");
  experiment->add_option("--nmax", o.nmax, "iterations")->check(CLI::Range(1, 100000));

  auto* report = app.add_subcommand("report", "aggregate report for one semiflow");
  add_common(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*classify) emit_json(o, cmd_classify(o));
    else if (*report) emit_json(o, cmd_report(o));
    else if (kind == "trajectory") emit_table(o, exp_trajectory(o));
    else if (kind == "iterate-decay") emit_table(o, exp_iterate_decay(o));
    else if (kind == "supnorm") emit_table(o, exp_supnorm(o));
    else emit_table(o, exp_radial(o));
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
