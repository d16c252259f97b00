#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hjnest/experiment.hpp"

using namespace hjnest;

namespace {

ExperimentConfig shifted_config() {
  ExperimentConfig cfg;
  cfg.example_id = "shifted-eikonal";
  cfg.prototype = Prototype::P1;
  cfg.k_list = {2, 4, 8};
  cfg.region_r = 1.0;
  cfg.solver = SolverChoice::Fd;
  cfg.h = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("fd sweep of the shifted family lands on e^{R-k}") {
  const auto rows = run_experiment(shifted_config());
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.converged);
    CHECK(row.solver == "fd");
    CHECK(std::abs(row.sup_error - std::exp(1.0 - row.k)) <= 5e-3);
  }
  // sorted by k
  CHECK(rows[0].k == 2);
  CHECK(rows[2].k == 8);
}

TEST_CASE("entries without a closed form compare against the proxy limit") {
  ExperimentConfig cfg;
  cfg.example_id = "pure-eikonal";
  cfg.k_list = {1, 2};
  cfg.region_r = 0.5;
  cfg.h = 1e-2;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 2);  // the proxy solve itself is excluded
  for (const auto& row : rows) CHECK(row.sup_error <= 1e-8);
}

TEST_CASE("sl sweep of the control family tracks the stated decay") {
  ExperimentConfig cfg;
  cfg.example_id = "control-eikonal";
  cfg.k_list = {1, 2, 3};
  cfg.region_r = 0.5;
  cfg.solver = SolverChoice::Sl;
  cfg.h = 2e-3;
  cfg.dt = 2e-3;
  cfg.n_controls = 41;
  cfg.w_max = 1.0;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const double predicted = 0.5 * std::exp(0.5) * std::exp(-2.0 * row.k);
    CHECK(std::abs(row.sup_error - predicted) <= 1e-2);
  }
}

TEST_CASE("p2 sweep pairs the shifted eikonal with its own closed form") {
  ExperimentConfig cfg;
  cfg.example_id = "shifted-eikonal";
  cfg.prototype = Prototype::P2;
  cfg.k_list = {2, 4, 8};
  cfg.region_r = 0.45;
  cfg.h = 1e-3;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.converged);
    CHECK(row.prototype == "p2");
    // exact: max over |x| <= R of e^{x-1}(e^{1/k} - 1)
    const double predicted =
        std::exp(0.45 - 1.0) * (std::exp(1.0 / row.k) - 1.0);
    CHECK(std::abs(row.sup_error - predicted) <= 5e-3);
  }
}

TEST_CASE("both-solver sweeps emit one row per solver") {
  ExperimentConfig cfg;
  cfg.example_id = "control-eikonal";
  cfg.k_list = {1, 2};
  cfg.region_r = 0.5;
  cfg.solver = SolverChoice::Both;
  cfg.h = 5e-3;
  cfg.dt = 5e-3;
  cfg.n_controls = 41;
  cfg.w_max = 1.0;
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 4);
  int fd_rows = 0, sl_rows = 0;
  for (const auto& row : rows) {
    CHECK(row.converged);
    // the gap to the limit is (e^R/2) e^{-2k} up to discretization
    const double predicted = 0.5 * std::exp(0.5) * std::exp(-2.0 * row.k);
    CHECK(std::abs(row.sup_error - predicted) <= 2e-2);
    (row.solver == "fd" ? fd_rows : sl_rows) += 1;
  }
  CHECK(fd_rows == 2);
  CHECK(sl_rows == 2);
}

TEST_CASE("oversized regions are a config error") {
  ExperimentConfig cfg = shifted_config();
  cfg.region_r = 5.0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("unknown example ids are rejected") {
  ExperimentConfig cfg;
  cfg.example_id = "sphere-packing";
  cfg.k_list = {1, 2};
  CHECK_THROWS_AS(run_experiment(cfg), UnknownExample);
}

TEST_CASE("csv round-trips bit for bit") {
  ExperimentConfig cfg = shifted_config();
  cfg.k_list = {1, 2};
  cfg.h = 5e-3;
  const auto rows = run_experiment(cfg);
  std::stringstream ss;
  emit_csv(rows, ss);
  const std::string text = ss.str();
  CHECK(text.rfind("example,prototype,solver,k,h,region_R,sup_error,residual,"
                   "iterations,wall_ms,converged\n",
                   0) == 0);
  std::stringstream in(text);
  const auto parsed = parse_csv(in);
  REQUIRE(parsed.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::memcmp(&parsed[i].sup_error, &rows[i].sup_error,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&parsed[i].residual, &rows[i].residual,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&parsed[i].h, &rows[i].h, sizeof(double)) == 0);
    CHECK(parsed[i].k == rows[i].k);
    CHECK(parsed[i].iterations == rows[i].iterations);
    CHECK(parsed[i].converged == rows[i].converged);
  }
}

TEST_CASE("empty reports are an error and write no file") {
  std::stringstream ss;
  CHECK_THROWS_AS(emit_csv({}, ss), IoError);
  const char* path = "hjnest_test_should_not_exist.csv";
  std::remove(path);
  CHECK_THROWS_AS(emit_csv_file({}, path), IoError);
  std::ifstream probe(path);
  CHECK_FALSE(probe.good());
}

TEST_CASE("json report carries rows and fit summaries") {
  ExperimentConfig cfg = shifted_config();
  cfg.k_list = {2, 4, 8, 16};
  cfg.h = 5e-3;
  const auto rows = run_experiment(cfg);
  const auto fits = fit_rows(rows, cfg);
  REQUIRE(!fits.empty());
  const std::string doc = emit_json(rows, fits);
  CHECK(doc.find("\"exponent\"") != std::string::npos);
  CHECK(doc.find("\"sup_error\"") != std::string::npos);
  CHECK(doc.find("\"theorem\"") != std::string::npos);
  // exponential family: the classifier should pick the exponential model
  CHECK(fits[0].model == "exponential");
  CHECK(std::abs(fits[0].fit.exponent - 1.0) <= 0.05);
}

TEST_CASE("identical configs produce identical rows") {
  ExperimentConfig cfg = shifted_config();
  cfg.k_list = {1, 2};
  cfg.h = 5e-3;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(std::memcmp(&a[i].sup_error, &b[i].sup_error, sizeof(double)) == 0);
    CHECK(a[i].iterations == b[i].iterations);
  }
}

TEST_CASE("short sweeps below the classifier span still pick the best model") {
  ExperimentConfig cfg;
  cfg.example_id = "capped-cone";
  cfg.alpha = 2.0;
  cfg.k_list = {2, 4, 6};  // span factor 3, below classify_rate's gate
  cfg.region_r = 1.0;
  cfg.h = 2e-3;
  const auto rows = run_experiment(cfg);
  const auto fits = fit_rows(rows, cfg);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].model == "exponential");
  CHECK(std::abs(fits[0].fit.exponent - 0.5) <= 0.05);
}
