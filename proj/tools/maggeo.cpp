#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "maggeo/cli.hpp"

using namespace maggeo;

namespace {

// "m,k" -> Signature
bool parse_signature(const std::string &text, Signature &out) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return false;
  try {
    out = Signature(std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
  } catch (const std::exception &) {
    return false;
  }
  return true;
}

bool parse_point(const std::string &text, std::vector<double> &out) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception &) {
      return false;
    }
  }
  return !out.empty();
}

void add_common_options(CLI::App *cmd, cli::RunConfig &cfg, std::string &sig_text,
                        std::vector<std::string> &param_texts, std::vector<std::string> &at_texts) {
  cmd->add_option("--signature", sig_text, "signature m,k");
  cmd->add_option("--metric", cfg.metric_source, "metric preset (flat, two_sphere, schwarzschild, de_sitter) or JSON file");
  cmd->add_option("--param", param_texts, "NAME=VAL parameter binding (repeatable)");
  cmd->add_option("--connection", cfg.connection_source, "levi_civita | zero | JSON file");
  cmd->add_option("--points", cfg.random_points, "number of seeded random sample points");
  cmd->add_option("--at", at_texts, "explicit sample point x0,x1,... (repeatable)");
  cmd->add_option("--seed", cfg.seed, "seed for all randomized sweeps");
  double tol = 0.0;
  cmd->add_option_function<double>(
      "--tol", [&cfg](const double &t) { cfg.tol_override = t; }, "tolerance override");
  (void)tol;
  cmd->add_option("--json", cfg.json_path, "write the JSON report to this path");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"metric-affine geometry and spinor algebra verification tool"};
  app.require_subcommand(1);

  cli::RunConfig cfg;
  std::string sig_text;
  std::vector<std::string> param_texts;
  std::vector<std::string> at_texts;

  const std::vector<std::string> names = {"clifford-table", "gamma-check", "curvature",
                                          "decompose",      "residual",    "covariance",
                                          "spin-connection"};
  const std::vector<std::string> descriptions = {
      "blade multiplication table and generator relation defects",
      "gamma construction, commutant and intertwiner checks",
      "christoffel, torsion and curvature values at sample points",
      "connection decomposition and reconstruction report",
      "field-equation residuals and the on-shell reduction chain",
      "general-covariance and jet-factorization defects",
      "tetrad coefficients, spin connection and vertical differential",
  };
  for (size_t i = 0; i < names.size(); ++i) {
    CLI::App *cmd = app.add_subcommand(names[i], descriptions[i]);
    add_common_options(cmd, cfg, sig_text, param_texts, at_texts);
    if (names[i] == "gamma-check")
      cmd->add_option("--compare-metric", cfg.compare_metric, "diagonal metric diag(a,b,...)");
  }

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  if (!sig_text.empty()) {
    Signature sig(1, 0);
    if (!parse_signature(sig_text, sig)) {
      std::fprintf(stderr, "bad --signature '%s', expected m,k\n", sig_text.c_str());
      return 2;
    }
    cfg.signature = sig;
  }
  for (const auto &p : param_texts) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "bad --param '%s', expected NAME=VAL\n", p.c_str());
      return 2;
    }
    try {
      cfg.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception &) {
      std::fprintf(stderr, "bad --param value in '%s'\n", p.c_str());
      return 2;
    }
  }
  for (const auto &a : at_texts) {
    std::vector<double> pt;
    if (!parse_point(a, pt)) {
      std::fprintf(stderr, "bad --at '%s', expected x0,x1,...\n", a.c_str());
      return 2;
    }
    cfg.explicit_points.push_back(pt);
  }

  const cli::RunResult result = cli::run(cfg);
  return cli::write_report(result, cfg.json_path);
}
