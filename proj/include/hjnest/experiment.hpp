#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hjnest/closed_form.hpp"
#include "hjnest/fd_solver.hpp"
#include "hjnest/grid.hpp"
#include "hjnest/rate_analysis.hpp"
#include "hjnest/sl_solver.hpp"

namespace hjnest {

enum class SolverChoice { Fd, Sl, Both };

struct ExperimentConfig {
  std::string example_id = "shifted-eikonal";
  Prototype prototype = Prototype::P1;
  std::vector<int> k_list;
  double region_r = 1.0;
  SolverChoice solver = SolverChoice::Fd;
  double h = 1e-3;
  int n_nodes = 0;  // 0 -> from h, forced odd
  double dt = 1e-3;
  int n_controls = 201;
  double w_max = 0.0;
  double tol = 1e-10;
  double theta = 0.0;   // 0 -> auto
  long max_iters = 0;   // 0 -> auto
  double error_floor = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
  double m = 2.0;
};

struct ResultRow {
  std::string example;
  std::string prototype;  // "p1" | "p2"
  std::string solver;     // "fd" | "sl"
  int k = 0;
  double h = 0.0;
  double region_r = 0.0;
  double sup_error = 0.0;
  double residual = 0.0;
  long iterations = 0;
  double wall_ms = 0.0;
  bool converged = false;
};

struct FitSummary {
  std::string example;
  std::string prototype;
  std::string solver;
  double region_r = 0.0;
  RateFit fit{RateModel::PowerLaw, 1.0, 0.0, 0.0};
  std::string model;
  std::string theorem;  // bound shape id, empty when not checked
  bool holds = false;
  double fitted_c = 0.0;
};

/// Solves every (k, solver) cell of the config concurrently and measures the
/// sup error against the oracle limit on |x| <= region_r. Entries without a
/// closed-form limit are compared against a proxy: the same solver at
/// k' = 2 max(k_list), which is excluded from the rows. Deterministic:
/// identical configs produce identical rows (sorted by example, solver, k).
/// Throws UnknownExample; non-converged cells are flagged, not thrown.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Rate fits over the converged rows above the error floor, one per solver,
/// plus the bound check matching the family (InverseK on P2, HolderPower for
/// holder-cone, ExpEnvelope/ExpEnvelopeConvex else). Rows below 3 points are
/// skipped rather than thrown.
std::vector<FitSummary> fit_rows(const std::vector<ResultRow>& rows,
                                 const ExperimentConfig& config);

/// CSV columns, in order:
/// example,prototype,solver,k,h,region_R,sup_error,residual,iterations,wall_ms,converged
/// Numeric fields print as fixed 17-significant-digit scientific so the file
/// re-parses bit-for-bit. Empty rows are an error (IoError), no file written.
void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv_file(const std::vector<ResultRow>& rows,
                   const std::string& path);

/// JSON document {"rows": [...], "fits": [...]} using shortest round-trip
/// number formatting; fit objects follow the schema
/// {example, prototype, region_R, model, amplitude, exponent,
///  rms_log_residual, theorem, holds, fitted_C}.
std::string emit_json(const std::vector<ResultRow>& rows,
                      const std::vector<FitSummary>& fits);
void emit_json_file(const std::vector<ResultRow>& rows,
                    const std::vector<FitSummary>& fits,
                    const std::string& path);

std::vector<ResultRow> parse_csv(std::istream& in);

/// Oracle pairing for an example id under a prototype; nullopt when the
/// entry has no closed form (double-well, pure-eikonal, or P2 beyond the
/// shifted eikonal).
std::optional<OracleId> oracle_for(const std::string& example_id,
                                   Prototype prototype, double alpha,
                                   double beta, double gamma, double m);

}  // namespace hjnest
