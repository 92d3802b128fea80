// Run configuration: structured-text parsing with full validation, and
// normalized re-emission for round-tripping.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlms/geometry.hpp"
#include "nlms/kernel.hpp"
#include "nlms/solver.hpp"

namespace nlms {

enum class Command { minimize, curvature_scan, lemma_check, slide, verify };

std::string command_name(Command c);
std::optional<Command> command_from_name(const std::string& s);

struct RunConfig {
  Command command = Command::minimize;
  // grid
  double h = 1.0 / 16.0;
  int horiz_cells = 64;
  int vert_cells = 64;
  // domain
  int n = 2;
  std::vector<std::pair<double, double>> omega;  // intervals (n=2)
  // exterior
  std::string exterior_kind = "constant";  // constant | jump | piecewise
  double exterior_value = 0.0;
  double exterior_left = 0.0;
  double exterior_right = 0.0;
  std::vector<std::pair<double, double>> exterior_breakpoints;
  // kernel
  double s = 0.25;
  TailPolicy tail_policy = TailPolicy::halfspace_columns;
  // solver
  std::string solver_mode = "exact";  // exact | descent
  int64_t max_free_cells = 1 << 14;
  int graph_radius_cells = 64;
  // lemma-check parameters
  std::vector<double> lemma_R = {1, 2, 4, 8};
  double lemma_lambda = 0.5;
  std::vector<double> lemma_lambdas = {0.0625, 0.125, 0.25, 0.5};
  double lemma_alpha = 0.9;
  double lemma_C_o = 1.0;
  double lemma_L = 1.0;
  // output
  std::string out_dir = "out";

  std::shared_ptr<const Grid> make_grid() const;
  std::shared_ptr<const CylinderDomain> make_domain() const;
  std::shared_ptr<const ExteriorGraphData> make_exterior() const;
  std::shared_ptr<const Kernel> make_kernel() const;
  Problem make_problem() const;
};

struct ConfigError {
  int line = 0;  // 0 when the error is semantic rather than syntactic
  std::string message;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<ConfigError> errors;  // all validation errors, not just the first
};

ParseOutcome parse_config(const std::string& text);
std::string emit_config(const RunConfig& cfg);

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;
};

// Executes the configured pipeline, writing rasters, CSV tables and the
// master report under cfg.out_dir.
RunResult run(const RunConfig& cfg);

}  // namespace nlms
