#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "maggeo/clifford_group.hpp"
#include "maggeo/expr.hpp"
#include "maggeo/field_eqs.hpp"
#include "maggeo/fields.hpp"
#include "maggeo/gamma_rep.hpp"
#include "maggeo/geometry.hpp"
#include "maggeo/multivector.hpp"
#include "maggeo/spin_connection.hpp"
#include "maggeo/spinor_ideal.hpp"

namespace maggeo::cli {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<Signature> signature;
  std::string metric_source;                    // preset name, file path, or inline diag(...)
  std::map<std::string, double> params;
  std::string connection_source = "levi_civita"; // levi_civita | zero | file path
  std::string compare_metric;                   // gamma-check: inline diag(...) or file
  int random_points = 0;
  std::vector<std::vector<double>> explicit_points;
  std::uint64_t seed = 0;
  std::optional<double> tol_override;
  std::string json_path; // empty: stdout
};

struct RunResult {
  int exit_code = 0;
  json report;
};

// --- helpers -----------------------------------------------------------------

namespace detail {

inline std::vector<double> parse_diag_list(const std::string &text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (text.substr(0, open) != "diag" || open == std::string::npos || close == std::string::npos ||
      close < open)
    throw ConfigError("expected diag(a,b,...) but got '" + text + "'");
  std::vector<double> entries;
  std::string inner = text.substr(open + 1, close - open - 1);
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      entries.push_back(std::stod(item));
    } catch (const std::exception &) {
      throw ConfigError("bad diag entry '" + item + "'");
    }
  }
  if (entries.empty()) throw ConfigError("empty diag(...) metric");
  return entries;
}

inline Signature signature_of_diagonal(const std::vector<double> &d) {
  int plus = 0, minus = 0;
  for (double v : d) {
    if (v > 0.0)
      ++plus;
    else if (v < 0.0)
      ++minus;
    else
      throw ConfigError("degenerate diagonal metric entry 0");
  }
  return Signature(plus, minus);
}

inline MetricField metric_from_diagonal(const std::vector<double> &d) {
  const int n = static_cast<int>(d.size());
  MetricField m;
  m.n = n;
  m.sig = signature_of_diagonal(d);
  m.comp.assign(static_cast<size_t>(n) * n, constant_fn(0.0));
  for (int i = 0; i < n; ++i) m.comp[i * n + i] = constant_fn(d[i]);
  return m;
}

inline MetricField metric_from_json(const json &doc, const std::map<std::string, double> &params) {
  if (!doc.contains("n") || !doc.contains("signature"))
    throw ConfigError("metric file needs fields 'n' and 'signature'");
  const int n = doc.at("n").get<int>();
  const auto sig_arr = doc.at("signature");
  const Signature sig(sig_arr.at(0).get<int>(), sig_arr.at(1).get<int>());
  if (sig.dim() != n) throw ConfigError("metric file: signature does not match n");

  std::map<std::string, double> bound = params;
  if (doc.contains("params"))
    for (const auto &[key, val] : doc.at("params").items())
      if (!bound.count(key)) bound[key] = val.get<double>();
  std::vector<std::string> param_names;
  for (const auto &[key, val] : bound) param_names.push_back(key);

  MetricField m;
  m.n = n;
  m.sig = sig;
  m.comp.assign(static_cast<size_t>(n) * n, constant_fn(0.0));

  const json &metric = doc.at("metric");
  const auto compile = [&](const std::string &text) {
    return expression_field(parse_expression(text, n, param_names), bound);
  };
  if (metric.contains("diag")) {
    const auto &diag = metric.at("diag");
    if (static_cast<int>(diag.size()) != n) throw ConfigError("metric file: diag length != n");
    for (int i = 0; i < n; ++i) m.comp[i * n + i] = compile(diag.at(i).get<std::string>());
  } else if (metric.contains("rows")) {
    const auto &rows = metric.at("rows");
    if (static_cast<int>(rows.size()) != n) throw ConfigError("metric file: need n rows");
    // upper triangle read, lower filled by symmetry
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const ScalarFn f = compile(rows.at(i).at(j).get<std::string>());
        m.comp[i * n + j] = f;
        m.comp[j * n + i] = f;
      }
  } else {
    throw ConfigError("metric file: expected 'diag' or 'rows'");
  }
  return m;
}

inline json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception &e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
  return doc;
}

} // namespace detail

inline MetricField build_metric(const RunConfig &cfg) {
  const std::string &src = cfg.metric_source;
  if (src.empty() || src == "flat") {
    if (!cfg.signature) throw ConfigError("flat metric needs --signature m,k");
    return metric_flat(*cfg.signature);
  }
  if (src == "two_sphere" || src == "2-sphere" || src == "sphere") return metric_two_sphere();
  if (src == "schwarzschild") {
    const auto it = cfg.params.find("M");
    return metric_schwarzschild(it == cfg.params.end() ? 1.0 : it->second);
  }
  if (src == "de_sitter") {
    const auto it = cfg.params.find("L");
    return metric_de_sitter(it == cfg.params.end() ? 10.0 : it->second);
  }
  if (src.rfind("diag(", 0) == 0) return detail::metric_from_diagonal(detail::parse_diag_list(src));
  return detail::metric_from_json(detail::load_json_file(src), cfg.params);
}

inline ConnectionField build_connection(const RunConfig &cfg, const MetricField &g) {
  const std::string &src = cfg.connection_source;
  if (src == "levi_civita") return levi_civita_connection(g);
  if (src == "zero") return connection_zero(g.n);
  const json doc = detail::load_json_file(src);
  if (!doc.contains("K")) throw ConfigError("connection file: expected field 'K' (n^3 expressions)");
  const auto &k = doc.at("K");
  const int n = g.n;
  if (static_cast<int>(k.size()) != n) throw ConfigError("connection file: K must be n x n x n");
  std::vector<std::string> param_names;
  for (const auto &[key, val] : cfg.params) param_names.push_back(key);
  std::vector<ScalarFn> comp;
  for (int mu = 0; mu < n; ++mu)
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        comp.push_back(expression_field(
            parse_expression(k.at(mu).at(al).at(be).get<std::string>(), n, param_names),
            cfg.params));
  return connection_from_components(n, comp);
}

// Seeded sample points in preset-appropriate ranges.
inline std::vector<Vec> sample_points(const RunConfig &cfg, const MetricField &g) {
  std::vector<Vec> pts;
  for (const auto &p : cfg.explicit_points) {
    if (static_cast<int>(p.size()) != g.n)
      throw ConfigError("--at point has the wrong dimension");
    Vec v(g.n);
    for (int i = 0; i < g.n; ++i) v(i) = p[i];
    pts.push_back(v);
  }
  if (pts.empty()) {
    const int count = cfg.random_points > 0 ? cfg.random_points : 5;
    Rng rng(cfg.seed);
    for (int i = 0; i < count; ++i) {
      Vec x(g.n);
      if (cfg.metric_source == "schwarzschild" || cfg.metric_source == "de_sitter") {
        x(0) = rng.uniform(-1.0, 1.0);
        x(1) = rng.uniform(3.0, 10.0);
        x(2) = rng.uniform(0.4, M_PI - 0.4);
        x(3) = rng.uniform(0.0, 2.0 * M_PI);
      } else if (g.n == 2 && (cfg.metric_source == "two_sphere" || cfg.metric_source == "2-sphere" ||
                              cfg.metric_source == "sphere")) {
        x(0) = rng.uniform(0.4, M_PI - 0.4);
        x(1) = rng.uniform(0.0, 2.0 * M_PI);
      } else {
        for (int j = 0; j < g.n; ++j) x(j) = rng.uniform(-0.5, 0.5);
      }
      pts.push_back(x);
    }
  }
  return pts;
}

// Config validation shared by the field commands: declared signature (when
// given) must match the metric eigenvalue signs at the first sample point.
inline void check_signature_consistency(const RunConfig &cfg, const MetricField &g,
                                        const std::vector<Vec> &pts) {
  if (pts.empty()) throw ConfigError("no sample points");
  const MetricEval ev = g.eval(pts.front());
  Eigen::SelfAdjointEigenSolver<Mat> es(ev.g);
  int plus = 0, minus = 0;
  for (int i = 0; i < g.n; ++i) (es.eigenvalues()(i) > 0.0 ? plus : minus)++;
  const Signature found(plus, minus);
  if (found != g.sig)
    throw ConfigError("metric eigenvalue signs " + found.str() +
                      " do not match the declared signature " + g.sig.str());
  if (cfg.signature && *cfg.signature != g.sig)
    throw ConfigError("--signature " + cfg.signature->str() +
                      " does not match the metric's signature " + g.sig.str());
}

namespace detail {

inline json vec_json(const Vec &v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json mat_json(const Mat &m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json cmat_json(const CMat &m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline json tensor3_json(const Tensor3 &t) {
  json out = json::array();
  for (int i = 0; i < t.n; ++i) {
    json mid = json::array();
    for (int j = 0; j < t.n; ++j) {
      json row = json::array();
      for (int k = 0; k < t.n; ++k) row.push_back(t(i, j, k));
      mid.push_back(row);
    }
    out.push_back(mid);
  }
  return out;
}

struct DefectTable {
  std::vector<std::pair<std::string, double>> tolerances;
  double max_defect = 0.0;
  bool pass = true;

  void require(json &defects, const std::string &name, double value) {
    defects[name] = value;
    max_defect = std::max(max_defect, value);
    for (const auto &[key, tol] : tolerances)
      if (key == name && !(value <= tol)) pass = false;
  }
};

inline json config_json(const RunConfig &cfg) {
  json c;
  c["command"] = cfg.command;
  if (cfg.signature) c["signature"] = {cfg.signature->m, cfg.signature->k};
  if (!cfg.metric_source.empty()) c["metric"] = cfg.metric_source;
  if (!cfg.params.empty()) c["params"] = cfg.params;
  c["connection"] = cfg.connection_source;
  if (!cfg.compare_metric.empty()) c["compare_metric"] = cfg.compare_metric;
  c["seed"] = cfg.seed;
  if (cfg.random_points > 0) c["points"] = cfg.random_points;
  if (!cfg.explicit_points.empty()) c["at"] = cfg.explicit_points;
  return c;
}

} // namespace detail

// --- commands ----------------------------------------------------------------

namespace commands {

inline void clifford_table(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  if (!cfg.signature) throw ConfigError("clifford-table needs --signature m,k");
  const Signature sig = *cfg.signature;
  const int n = sig.dim();
  const int total = 1 << n;
  const auto gens = construct_algebra(sig);

  json entry;
  entry["point"] = json::array();
  json rows = json::array();
  for (int a = 0; a < total; ++a) {
    json row = json::array();
    const Multivector ba = Multivector::blade(sig, static_cast<unsigned>(a), 1.0);
    for (int b = 0; b < total; ++b) {
      const Multivector prod = ba * Multivector::blade(sig, static_cast<unsigned>(b), 1.0);
      if (prod.coefficients().size() != 1)
        throw std::logic_error("blade product is not a single blade");
      const auto &[mask, coeff] = *prod.coefficients().begin();
      row.push_back(json::array({static_cast<int>(mask), coeff.real()}));
    }
    rows.push_back(row);
  }

  double relation_defect = 0.0;
  const Multivector e = Multivector::unit(sig);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double eta = (a == b) ? sig.metric(a + 1) : 0.0;
      relation_defect = std::max(
          relation_defect,
          max_abs_diff(gens[a] * gens[b] + gens[b] * gens[a], e * cplx(2.0 * eta)));
    }

  std::vector<Multivector> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) pairs.push_back(gens[a] * gens[b]);

  json values;
  values["dimension"] = static_cast<int>(reachable_blades(gens).size());
  values["even_dimension"] = static_cast<int>(reachable_blades(pairs).size());
  values["table"] = rows;
  entry["values"] = values;

  json defects;
  table.require(defects, "relation_defect", relation_defect);
  table.require(defects, "dimension_defect",
                std::abs(double(values["dimension"].get<int>() - total)));
  table.require(defects, "even_dimension_defect",
                n >= 2 ? std::abs(double(values["even_dimension"].get<int>() - total / 2)) : 0.0);
  entry["defects"] = defects;
  results.push_back(entry);
}

inline void gamma_check(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  if (!cfg.signature) throw ConfigError("gamma-check needs --signature m,k");
  const Signature sig = *cfg.signature;
  if (sig.dim() % 2 != 0) throw ConfigError("gamma-check: odd dimension unsupported");
  const GammaRep rep = gamma_matrices(sig);

  json entry;
  entry["point"] = json::array();
  json values;
  values["spinor_dimension"] = rep.dim();
  values["commutant_dimension"] = commutant_dimension(rep);

  json defects;
  table.require(defects, "clifford_relation_defect", clifford_relation_defect(rep));
  table.require(defects, "commutant_defect",
                std::abs(double(values["commutant_dimension"].get<int>() - 1)));

  // uniqueness against the minimal-left-ideal representation of the
  // complexification
  const Signature csig(sig.dim(), 0);
  const LeftIdeal ideal = minimal_left_ideal(minimal_idempotent(csig));
  const auto ideal_rep = left_regular_representation(ideal.basis);
  const GammaRep crep = gamma_matrices(csig);
  const int uniq = intertwiner_space(ideal_rep, crep.gammas).dimension;
  values["ideal_intertwiner_dimension"] = uniq;
  table.require(defects, "ideal_uniqueness_defect", std::abs(double(uniq - 1)));

  if (!cfg.compare_metric.empty()) {
    const auto diag = detail::parse_diag_list(cfg.compare_metric);
    if (static_cast<int>(diag.size()) != sig.dim())
      throw ConfigError("--compare-metric dimension mismatch");
    Mat eta = eta_matrix(sig);
    Mat gp = Mat::Zero(sig.dim(), sig.dim());
    for (int i = 0; i < sig.dim(); ++i) gp(i, i) = diag[i];
    const auto fam_eta = gamma_g_family(rep, tetrad_from_metric(eta, sig));
    const auto fam_gp = gamma_g_family(rep, tetrad_from_metric(gp, detail::signature_of_diagonal(diag)));
    const int dim = intertwiner_space(fam_eta, fam_gp).dimension;
    values["intertwiner_dimension"] = dim;
    const int expected = max_abs(Mat(eta - gp)) < 1e-12 ? 1 : 0;
    values["intertwiner_expected"] = expected;
    table.require(defects, "metric_equivalence_defect", std::abs(double(dim - expected)));
  }

  entry["values"] = values;
  entry["defects"] = defects;
  results.push_back(entry);
}

inline void curvature_cmd(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  const MetricField g = build_metric(cfg);
  const ConnectionField k = build_connection(cfg, g);
  const auto pts = sample_points(cfg, g);
  check_signature_consistency(cfg, g, pts);

  for (const Vec &x : pts) {
    const MetricEval gev = g.eval(x);
    const ConnEval kev = k.eval(x);
    const Tensor3 chris = christoffel_lower(gev);
    const Tensor4 riem = curvature(kev);
    const Tensor3 tors = torsion(kev);

    double scalar = 0.0;
    for (int la = 0; la < g.n; ++la)
      for (int mu = 0; mu < g.n; ++mu)
        for (int be = 0; be < g.n; ++be) scalar += gev.ginv(mu, be) * riem(la, mu, la, be);

    double antisym = 0.0;
    for (int la = 0; la < g.n; ++la)
      for (int mu = 0; mu < g.n; ++mu)
        for (int al = 0; al < g.n; ++al)
          for (int be = 0; be < g.n; ++be)
            antisym = std::max(antisym, std::abs(riem(la, mu, al, be) + riem(mu, la, al, be)));

    double metricity = 0.0;
    for (int mu = 0; mu < g.n; ++mu)
      for (int nu = 0; nu < g.n; ++nu)
        for (int al = 0; al < g.n; ++al)
          metricity = std::max(metricity, std::abs(gev.dg(mu, nu, al) + chris(mu, nu, al) +
                                                   chris(mu, al, nu)));

    json entry;
    entry["point"] = detail::vec_json(x);
    json values;
    values["curvature_scalar"] = scalar;
    values["curvature_max"] = riem.max_abs();
    values["torsion_max"] = tors.max_abs();
    values["christoffel_max"] = chris.max_abs();
    entry["values"] = values;
    json defects;
    table.require(defects, "curvature_antisymmetry_defect", antisym);
    table.require(defects, "metricity_identity_defect", metricity);
    entry["defects"] = defects;
    results.push_back(entry);
  }
}

inline void decompose_cmd(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  const MetricField g = build_metric(cfg);
  const ConnectionField k = build_connection(cfg, g);
  const auto pts = sample_points(cfg, g);
  check_signature_consistency(cfg, g, pts);

  for (const Vec &x : pts) {
    const MetricEval gev = g.eval(x);
    const ConnEval kev = k.eval(x);
    const Decomposition d = decompose_reconstruct(gev, kev.k);

    // metric connection rebuilt from the torsion of k must be metric and
    // reproduce that torsion
    const Tensor3 t_lo = lower_connection(gev, torsion(kev.k));
    const Tensor3 kg = metric_connection(gev, t_lo);
    const double metricity = nonmetricity(gev, kg).max_abs();
    const Tensor3 t_back = lower_connection(gev, torsion(kg));
    const double round_trip = (t_back - t_lo).max_abs();

    json entry;
    entry["point"] = detail::vec_json(x);
    json values;
    values["christoffel_max"] = d.christoffel.max_abs();
    values["contorsion_max"] = d.contorsion.max_abs();
    values["nonmetricity_max"] = d.nonmetricity.max_abs();
    entry["values"] = values;
    json defects;
    table.require(defects, "reconstruction_defect", d.reconstruction_defect);
    table.require(defects, "metric_connection_metricity", metricity);
    table.require(defects, "torsion_round_trip", round_trip);
    entry["defects"] = defects;
    results.push_back(entry);
  }
}

inline void residual_cmd(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  const MetricField g = build_metric(cfg);
  const ConnectionField k = build_connection(cfg, g);
  const FieldConfiguration fc = FieldConfiguration::from_metric(g, k);
  const auto pts = sample_points(cfg, g);
  check_signature_consistency(cfg, g, pts);

  const bool vacuum_expected = cfg.connection_source == "levi_civita";
  for (const Vec &x : pts) {
    const ResidualReport rep = residual_report(fc, x, 1e-8, 1e-9);

    json entry;
    entry["point"] = detail::vec_json(x);
    json values;
    values["e_metric"] = detail::mat_json(rep.e_metric);
    values["e_metric_max"] = max_abs(rep.e_metric);
    values["e_connection"] = detail::tensor3_json(rep.e_connection);
    values["e_connection_max"] = rep.e_connection.max_abs();
    values["nonmetricity"] = detail::tensor3_json(rep.c_nonmetricity);
    values["nonmetricity_max"] = rep.c_nonmetricity.max_abs();
    values["torsion"] = detail::tensor3_json(rep.t_torsion);
    values["torsion_max"] = rep.t_torsion.max_abs();
    values["contorsion"] = detail::tensor3_json(rep.s_contorsion);
    values["contorsion_max"] = rep.s_contorsion.max_abs();
    values["lagrangian"] = lagrangian_density(fc, x);
    entry["values"] = values;
    entry["tolerances"] = {{"metric", rep.tol_metric}, {"connection", rep.tol_connection}};

    json defects;
    table.require(defects, "reduced_identity_defect", rep.identity_defects.front().second);
    if (vacuum_expected) {
      table.require(defects, "e_connection_residual", rep.e_connection.max_abs());
      const OnshellReport onshell = onshell_reduction_check(fc, x, 1e-8);
      table.require(defects, "onshell_nonmetricity", onshell.nonmetricity_max);
      table.require(defects, "onshell_torsion", onshell.torsion_max);
      table.require(defects, "onshell_contorsion", onshell.contorsion_max);
      table.require(defects, "onshell_levi_civita", onshell.levi_civita_defect);
      if (cfg.metric_source == "schwarzschild")
        table.require(defects, "e_metric_residual", max_abs(rep.e_metric));
    }
    entry["defects"] = defects;
    results.push_back(entry);
  }
}

inline void covariance_cmd(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  const MetricField g = build_metric(cfg);
  const ConnectionField k = build_connection(cfg, g);
  const FieldConfiguration fc = FieldConfiguration::from_metric(g, k);
  const auto pts = sample_points(cfg, g);
  check_signature_consistency(cfg, g, pts);

  Rng rng(cfg.seed + 7);
  int tau_index = 0;
  for (const Vec &x : pts) {
    double worst_first_order = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const PolyVectorField tau = PolyVectorField::random(g.n, 3, rng, 0.5);
      worst_first_order =
          std::max(worst_first_order, std::abs(first_order_covariance_defect(fc, tau, x)));
      ++tau_index;
    }
    const UtiyamaCheck uti = utiyama_factorization_check(fc, x, cfg.seed + 1000 + tau_index);

    json entry;
    entry["point"] = detail::vec_json(x);
    json values;
    values["utiyama_generic_change"] = uti.r_changing_change;
    entry["values"] = values;
    json defects;
    table.require(defects, "covariance_first_order", worst_first_order);
    table.require(defects, "utiyama_symmetric_change", uti.r_preserving_change);
    entry["defects"] = defects;
    results.push_back(entry);
  }
}

inline void spin_connection_cmd(const RunConfig &cfg, json &results, detail::DefectTable &table) {
  const MetricField g = build_metric(cfg);
  if (g.n % 2 != 0) throw ConfigError("spin-connection: odd dimension unsupported");
  if (cfg.connection_source == "zero")
    throw ConfigError("spin-connection needs a metric connection (levi_civita)");
  const ConnectionField k = build_connection(cfg, g);
  const auto pts = sample_points(cfg, g);
  check_signature_consistency(cfg, g, pts);

  const GammaRep rep = gamma_matrices(g.sig);
  const SpinGenerators gens = spin_generators(rep);

  Rng rng(cfg.seed + 13);
  for (const Vec &x : pts) {
    const TetradEval h = tetrad_field_eval(g, x);
    const Tensor3 kg = k.eval(x).k;
    const Tensor3 a = tetrad_coefficients(h, kg);
    const auto omega = spin_connection_matrix(rep, gens, a);

    // restriction check with a random linear spinor field
    CVec y(rep.dim());
    std::vector<CVec> jets;
    for (int i = 0; i < rep.dim(); ++i) y(i) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    for (int la = 0; la < g.n; ++la) {
      CVec j(rep.dim());
      for (int i = 0; i < rep.dim(); ++i) j(i) = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      jets.push_back(j);
    }
    const auto dtilde =
        vertical_covariant_differential(rep, gens, h.coframe, h.dcoframe, kg, y, jets);
    double restriction = 0.0;
    for (int la = 0; la < g.n; ++la) {
      const CVec direct = jets[la] + omega[la] * y;
      restriction = std::max(restriction, (dtilde[la] - direct).cwiseAbs().maxCoeff());
    }

    json entry;
    entry["point"] = detail::vec_json(x);
    json values;
    json omegas = json::array();
    for (const auto &m : omega) omegas.push_back(detail::cmat_json(m));
    values["omega"] = omegas;
    values["coefficient_max"] = a.max_abs();
    entry["values"] = values;
    json defects;
    table.require(defects, "coefficient_antisymmetry",
                  tetrad_coefficient_antisymmetry_defect(g.sig, a));
    table.require(defects, "restriction_defect", restriction);
    entry["defects"] = defects;
    results.push_back(entry);
  }
}

} // namespace commands

inline std::vector<std::pair<std::string, double>> default_tolerances(const std::string &command) {
  if (command == "clifford-table")
    return {{"relation_defect", 0.0}, {"dimension_defect", 0.0}, {"even_dimension_defect", 0.0}};
  if (command == "gamma-check")
    return {{"clifford_relation_defect", 1e-12},
            {"commutant_defect", 0.0},
            {"ideal_uniqueness_defect", 0.0},
            {"metric_equivalence_defect", 0.0}};
  if (command == "curvature")
    return {{"curvature_antisymmetry_defect", 1e-12}, {"metricity_identity_defect", 1e-12}};
  if (command == "decompose")
    return {{"reconstruction_defect", 1e-10},
            {"metric_connection_metricity", 1e-12},
            {"torsion_round_trip", 1e-12}};
  if (command == "residual")
    return {{"reduced_identity_defect", 1e-9},
            {"e_connection_residual", 1e-9},
            {"onshell_nonmetricity", 1e-8},
            {"onshell_torsion", 1e-8},
            {"onshell_contorsion", 1e-8},
            {"onshell_levi_civita", 1e-8},
            {"e_metric_residual", 1e-8}};
  if (command == "covariance")
    return {{"covariance_first_order", 1e-8}, {"utiyama_symmetric_change", 1e-12}};
  if (command == "spin-connection")
    return {{"coefficient_antisymmetry", 1e-10}, {"restriction_defect", 1e-10}};
  throw ConfigError("unknown command '" + command + "'");
}

inline RunResult run(const RunConfig &cfg) {
  RunResult out;
  out.report["schema"] = "maggeo/1";
  out.report["command"] = cfg.command;
  out.report["config"] = detail::config_json(cfg);

  detail::DefectTable table;
  try {
    table.tolerances = default_tolerances(cfg.command);
    if (cfg.tol_override)
      for (auto &[name, tol] : table.tolerances) tol = *cfg.tol_override;

    json results = json::array();
    if (cfg.command == "clifford-table")
      commands::clifford_table(cfg, results, table);
    else if (cfg.command == "gamma-check")
      commands::gamma_check(cfg, results, table);
    else if (cfg.command == "curvature")
      commands::curvature_cmd(cfg, results, table);
    else if (cfg.command == "decompose")
      commands::decompose_cmd(cfg, results, table);
    else if (cfg.command == "residual")
      commands::residual_cmd(cfg, results, table);
    else if (cfg.command == "covariance")
      commands::covariance_cmd(cfg, results, table);
    else if (cfg.command == "spin-connection")
      commands::spin_connection_cmd(cfg, results, table);
    out.report["results"] = results;
  } catch (const ConfigError &e) {
    out.report["error"] = e.what();
    out.exit_code = 2;
    return out;
  } catch (const ParseError &e) {
    out.report["error"] = e.what();
    out.exit_code = 2;
    return out;
  } catch (const std::invalid_argument &e) {
    out.report["error"] = e.what();
    out.exit_code = 2;
    return out;
  }

  out.report["summary"] = {{"max_defect", table.max_defect}, {"pass", table.pass}};
  out.exit_code = table.pass ? 0 : 1;
  return out;
}

inline int write_report(const RunResult &result, const std::string &path) {
  const std::string text = result.report.dump(2) + "\n";
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) {
      std::fprintf(stderr, "cannot write %s\n", path.c_str());
      return 2;
    }
    outf << text;
  }
  return result.exit_code;
}

} // namespace maggeo::cli
