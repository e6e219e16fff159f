#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fpn/dixit_pindyck.hpp"
#include "fpn/solver_core.hpp"

namespace fpn::cli {

// Config or usage problem. what() names the offending field and, when known,
// the line in the config file.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { table, csv, structured };

std::optional<OutputFormat> parse_format(std::string_view text) noexcept;

/// One scenario as read from a YAML file:
///
///   model:
///     primitives: {mu: 0.0, sigma: 1.0, l: 0.5, c: 1.0, kappa: 0.1, chi: 0.05}
///     # or
///     constants: {structural: reference, a6: 451474, a7: 396499}
///     # or all of a1..a7 explicitly
///   initial: [15, 20]
///   solver: {alpha: 0.26131, epsilon: 1e-4, tol_step: 1e-5, tol_residual: 1e-4,
///            max_iter: 500, divergence_bound: 1e10, aitken: false}
///   sweep: {grid_step: 0.05, band: 0.01, dedup_tolerance: 1e-3, alphas: [...]}
///   output: {format: table, trace: false}
struct ScenarioConfig {
  std::optional<dixit_pindyck::EconomicPrimitives> primitives;
  std::optional<dixit_pindyck::ModelConstants> constants;
  Vector x0;

  std::optional<double> alpha;  // required by solve, unused by sweep
  SolverSettings solver;        // alpha member is filled in by resolve_solver()

  double grid_step = 0.05;
  double band = 0.01;
  double dedup_tolerance = 1e-3;
  std::optional<std::vector<double>> alphas;  // explicit sweep grid

  OutputFormat format = OutputFormat::table;
  bool trace = false;

  dixit_pindyck::ModelConstants model_constants() const;
  dixit_pindyck::ThresholdProblem problem() const;

  /// Solver settings with alpha applied; throws config_error when alpha is
  /// missing or not a valid fractional order.
  SolverSettings resolve_solver() const;

  /// Grid for sweeps: explicit alphas if given, otherwise the default grid
  /// at grid_step. Values within `band` of an integer are dropped.
  std::vector<FractionalOrder> sweep_grid() const;
};

ScenarioConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ScenarioConfig load_config(const std::string& path);

}  // namespace fpn::cli
