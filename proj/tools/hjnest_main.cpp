// hjnest command line: solve single state-constraint cells, sweep nested
// families and fit convergence rates, print closed-form values, or run the
// verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 solver not converged,
// 3 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hjnest/acceptance.hpp"
#include "hjnest/closed_form.hpp"
#include "hjnest/experiment.hpp"

namespace {

using namespace hjnest;

struct CommonOpts {
  std::string example = "shifted-eikonal";
  std::string prototype = "p1";
  std::string k_csv = "2";
  std::string solver = "fd";
  std::string x_csv = "0";
  double region = 1.0;
  double h = 1e-3;
  int n_nodes = 0;
  double dt = 1e-3;
  double tol = 1e-10;
  double theta = 0.0;
  long max_iters = 0;
  int n_controls = 201;
  double w_max = 0.0;
  double error_floor = 0.0;
  bool project_feet = false;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  double m = 2.0;
  std::string out;
  std::string format = "csv";
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->set_help_flag("--help", "print help");
  cmd->add_option("--example", o.example,
                  "catalog id: capped-cone, holder-cone, shifted-eikonal, "
                  "double-well, scaled-double-well, potential-double-well, "
                  "control-eikonal, pure-eikonal");
  cmd->add_option("--prototype", o.prototype, "p1 (balls of radius k) or p2");
  cmd->add_option("--k", o.k_csv, "family index, or comma list");
  cmd->add_option("--region,--region-R", o.region,
                  "evaluation region |x| <= R");
  cmd->add_option("--solver", o.solver, "fd, sl, or both");
  cmd->add_option("--h", o.h, "grid spacing");
  cmd->add_option("--n-nodes", o.n_nodes,
                  "node count (overrides --h; forced odd)");
  cmd->add_option("--dt", o.dt, "sl time step");
  cmd->add_option("--tol", o.tol, "fixed-point tolerance");
  cmd->add_option("--theta", o.theta,
                  "artificial viscosity (default: catalog Lipschitz bound)");
  cmd->add_option("--max-iters", o.max_iters, "iteration cap (default auto)");
  cmd->add_option("--n-controls", o.n_controls, "sl control count");
  cmd->add_option("--w-max", o.w_max, "sl control range (default catalog)");
  cmd->add_option("--error-floor", o.error_floor,
                  "drop errors below 10x this floor before fitting");
  cmd->add_flag("--project-feet", o.project_feet,
                "sl fallback: project leaving feet instead of excluding");
  cmd->add_option("--alpha", o.alpha, "capped-cone slope");
  cmd->add_option("--beta", o.beta, "capped-cone cap radius");
  cmd->add_option("--gamma", o.gamma, "holder-cone exponent in (0,1)");
  cmd->add_option("--m", o.m, "scaled-double-well power > 1");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--x", o.x_csv, "evaluation points, comma list (oracle)");
  cmd->add_option("--config", o.config_path,
                  "flat key=value config file; command-line flags override");
}

// Config keys are the flag names without the leading dashes. Values set on
// the command line win over the file.
void apply_config_file(CLI::App* cmd, CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw ConfigError("cannot read config file " + o.config_path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(o.config_path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt == nullptr || key == "config")
      throw ConfigError(o.config_path + ":" + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    if (opt->count() > 0) continue;  // explicit flag wins

    auto as_double = [&](const char* what) {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw ConfigError(std::string("bad ") + what + " value: " + value);
      }
    };
    if (key == "example") o.example = value;
    else if (key == "prototype") o.prototype = value;
    else if (key == "k") o.k_csv = value;
    else if (key == "region" || key == "region-R") o.region = as_double("region");
    else if (key == "solver") o.solver = value;
    else if (key == "h") o.h = as_double("h");
    else if (key == "n-nodes") o.n_nodes = static_cast<int>(as_double("n-nodes"));
    else if (key == "dt") o.dt = as_double("dt");
    else if (key == "tol") o.tol = as_double("tol");
    else if (key == "theta") o.theta = as_double("theta");
    else if (key == "max-iters") o.max_iters = static_cast<long>(as_double("max-iters"));
    else if (key == "n-controls") o.n_controls = static_cast<int>(as_double("n-controls"));
    else if (key == "w-max") o.w_max = as_double("w-max");
    else if (key == "error-floor") o.error_floor = as_double("error-floor");
    else if (key == "project-feet") o.project_feet = value == "true" || value == "1";
    else if (key == "alpha") o.alpha = as_double("alpha");
    else if (key == "beta") o.beta = as_double("beta");
    else if (key == "gamma") o.gamma = as_double("gamma");
    else if (key == "m") o.m = as_double("m");
    else if (key == "out") o.out = value;
    else if (key == "format") o.format = value;
    else if (key == "x") o.x_csv = value;
  }
}

std::vector<int> parse_k_list(const std::string& csv) {
  std::vector<int> ks;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      ks.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad k value: " + tok);
    }
  }
  if (ks.empty()) throw ConfigError("empty k list");
  return ks;
}

ExperimentConfig to_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  cfg.example_id = o.example;
  if (o.prototype == "p1")
    cfg.prototype = Prototype::P1;
  else if (o.prototype == "p2")
    cfg.prototype = Prototype::P2;
  else
    throw ConfigError("prototype must be p1 or p2");
  cfg.k_list = parse_k_list(o.k_csv);
  cfg.region_r = o.region;
  if (o.solver == "fd")
    cfg.solver = SolverChoice::Fd;
  else if (o.solver == "sl")
    cfg.solver = SolverChoice::Sl;
  else if (o.solver == "both")
    cfg.solver = SolverChoice::Both;
  else
    throw ConfigError("solver must be fd, sl, or both");
  cfg.h = o.h;
  cfg.n_nodes = o.n_nodes;
  cfg.dt = o.dt;
  cfg.tol = o.tol;
  cfg.theta = o.theta;
  cfg.max_iters = o.max_iters;
  cfg.n_controls = o.n_controls;
  cfg.w_max = o.w_max;
  cfg.error_floor = o.error_floor;
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;
  cfg.gamma = o.gamma;
  cfg.m = o.m;
  return cfg;
}

int cmd_solve(const CommonOpts& o) {
  const ExperimentConfig cfg = to_config(o);
  if (cfg.k_list.size() != 1) throw ConfigError("solve takes a single k");
  const HamiltonianSpec spec = HamiltonianSpec::from_string(
      cfg.example_id, cfg.alpha, cfg.beta, cfg.gamma, cfg.m);
  const Interval dom = build_domain(cfg.prototype, cfg.k_list[0]);
  const Grid1D grid = cfg.n_nodes > 0
                          ? build_grid(dom.a, dom.b, cfg.n_nodes | 1)
                          : build_grid_with_spacing(dom.a, dom.b, cfg.h);

  GridFunction u;
  SolveReport rep;
  if (cfg.solver == SolverChoice::Sl) {
    SlParams p;
    p.dt = cfg.dt;
    p.n_controls = cfg.n_controls;
    p.w_max = cfg.w_max;
    p.tol = cfg.tol;
    p.max_iters = cfg.max_iters;
    p.project_feet = o.project_feet;
    std::tie(u, rep) = solve_state_constraint_sl(spec, grid, p);
  } else {
    FdParams p;
    p.theta = cfg.theta;
    p.tol = cfg.tol;
    p.max_iters = cfg.max_iters;
    std::tie(u, rep) = solve_state_constraint_fd(spec, grid, p);
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw IoError("cannot open " + o.out);
    out = &file;
  }
  (*out) << "x,u\n";
  char buf[64];
  for (int i = 0; i < grid.n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.16e,%.16e\n", grid.node(i),
                  u.values[i]);
    (*out) << buf;
  }
  std::cerr << "iterations=" << rep.iterations
            << " residual=" << rep.final_residual
            << " converged=" << (rep.converged ? "true" : "false")
            << " wall_ms=" << rep.wall_ms << '\n';
  return rep.converged ? 0 : 2;
}

int cmd_rates(const CommonOpts& o) {
  const ExperimentConfig cfg = to_config(o);
  const std::vector<ResultRow> rows = run_experiment(cfg);
  const std::vector<FitSummary> fits = fit_rows(rows, cfg);
  if (o.format == "json") {
    if (o.out.empty())
      std::cout << emit_json(rows, fits) << '\n';
    else
      emit_json_file(rows, fits, o.out);
  } else if (o.format == "csv") {
    if (o.out.empty())
      emit_csv(rows, std::cout);
    else
      emit_csv_file(rows, o.out);
  } else {
    throw ConfigError("format must be csv or json");
  }
  for (const auto& row : rows)
    if (!row.converged) return 2;
  return 0;
}

int cmd_oracle(const CommonOpts& o) {
  const auto proto = o.prototype == "p2" ? Prototype::P2 : Prototype::P1;
  const auto found =
      oracle_for(o.example, proto, o.alpha, o.beta, o.gamma, o.m);
  if (!found)
    throw ConfigError("no closed form for " + o.example + " on " +
                      o.prototype);
  const OracleId id = *found;
  const std::vector<int> ks = parse_k_list(o.k_csv);
  std::vector<double> xs;
  {
    std::stringstream ss(o.x_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        xs.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad x value: " + tok);
      }
    }
  }
  if (xs.empty()) xs.push_back(0.0);
  std::cout << "example,k,x,u_k,u_limit\n";
  char buf[128];
  for (int k : ks) {
    for (double x : xs) {
      std::snprintf(buf, sizeof(buf), "%s,%d,%.16e,%.16e,%.16e\n",
                    o.example.c_str(), k, x, oracle_solution(id, k, x),
                    oracle_limit(id, x));
      std::cout << buf;
    }
  }
  if (!oracle_limit_is_unique(id))
    std::cerr << "note: the zero limit of this family is not the unique "
                 "whole-space solution\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-constraint Hamilton-Jacobi solvers on nested domains"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CommonOpts opts;

  CLI::App* solve =
      app.add_subcommand("solve", "solve one cell and print the grid function");
  add_common(solve, opts);
  CLI::App* rates = app.add_subcommand(
      "rates", "sweep k, measure errors against the limit, fit decay rates");
  add_common(rates, opts);
  CLI::App* oracle =
      app.add_subcommand("oracle", "print closed-form values of u_k and u");
  add_common(oracle, opts);
  oracle->add_option("--oracle", opts.example, "alias for --example");
  CLI::App* verify =
      app.add_subcommand("verify", "run the full verification suite");
  verify->set_help_flag("--help", "print help");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 3;
  }

  try {
    if (solve->parsed()) {
      apply_config_file(solve, opts);
      return cmd_solve(opts);
    }
    if (rates->parsed()) {
      apply_config_file(rates, opts);
      return cmd_rates(opts);
    }
    if (oracle->parsed()) {
      apply_config_file(oracle, opts);
      return cmd_oracle(opts);
    }
    if (verify->parsed()) {
      const auto results = run_acceptance(std::cout);
      return all_passed(results) ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const UnknownExample& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 3;
}
