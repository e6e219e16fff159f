#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fpn/fractional_kernel.hpp"

namespace fpn {

using Vector = std::vector<double>;

/// f: R^n -> R^n. Implementations must be deterministic and may throw
/// evaluation_failed (or a subclass) where f is not real-valued. Sweeps call
/// the same function object from several threads at once.
using ResidualFunction = std::function<Vector(std::span<const double>)>;

/// Phi(x) for a fixed-point scheme. Receives f(x) alongside x so the driver
/// never evaluates the residual twice at the same point.
using IterationFunction =
    std::function<Vector(std::span<const double> x, std::span<const double> fx)>;

struct SolverSettings {
  FractionalOrder alpha{0.5};
  double epsilon = 1e-4;
  double tol_step = 1e-5;      // on ||x_n - x_{n-1}||_2
  double tol_residual = 1e-4;  // on ||f(x_n)||_2
  int max_iter = 500;
  double divergence_bound = 1e10;
  bool aitken = false;  // restarted delta-squared every third iterate
  bool record_trace = false;

  /// Throws std::invalid_argument when a tolerance or bound is not positive.
  void validate() const;
};

enum class SolveStatus { converged, max_iterations, diverged, evaluation_failed };

std::string_view to_string(SolveStatus status) noexcept;
std::optional<SolveStatus> parse_status(std::string_view text) noexcept;

struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<double> step_norms;
  std::vector<double> residual_norms;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::max_iterations;
  Vector x_final;
  int iterations = 0;
  double final_step_norm = 0.0;
  double final_residual_norm = 0.0;
  std::optional<IterationTrace> trace;
  std::string message;  // set when status is not converged

  bool converged() const noexcept { return status == SolveStatus::converged; }
};

double norm2(std::span<const double> v) noexcept;
double distance2(std::span<const double> a, std::span<const double> b) noexcept;

/// x - P(x) f(x) with f(x) already known.
Vector fpn_update(std::span<const double> x, std::span<const double> fx,
                  FractionalOrder alpha, double epsilon);

/// One fractional pseudo-Newton step, x - P_{eps,beta}(x) f(x).
Vector fpn_step(const ResidualFunction& f, std::span<const double> x,
                FractionalOrder alpha, double epsilon);

IterationFunction make_fpn_iteration(FractionalOrder alpha, double epsilon);

/// Runs x_{i+1} = step(x_i) from x0 until both the step norm and the
/// residual norm fall under their tolerances, the iterate leaves
/// divergence_bound (or stops being finite), an evaluation fails, or
/// max_iter steps have been taken. Never throws for numerical failures;
/// throws std::invalid_argument for invalid settings.
SolveOutcome fixed_point_solve(const IterationFunction& step, const ResidualFunction& f,
                               std::span<const double> x0, const SolverSettings& settings);

/// fixed_point_solve driven by fpn_step with settings.alpha and settings.epsilon.
SolveOutcome fpn_solve(const ResidualFunction& f, std::span<const double> x0,
                       const SolverSettings& settings);

/// Central-difference Jacobian. Default step is max(1e-6, 1e-8 * ||x||_inf).
Eigen::MatrixXd fd_jacobian(const ResidualFunction& f, std::span<const double> x,
                            std::optional<double> h = std::nullopt);

/// Classical Newton step with a finite-difference Jacobian. Throws
/// singular_jacobian when the reciprocal condition estimate drops below 1e-12.
Vector newton_step(const ResidualFunction& f, std::span<const double> x);

/// Classical Newton iteration through the same driver as fpn_solve; a
/// singular Jacobian ends the solve with evaluation_failed.
SolveOutcome newton_solve(const ResidualFunction& f, std::span<const double> x0,
                          const SolverSettings& settings);

/// Component-wise Aitken delta-squared extrapolation of x0, x1, x2.
/// Components whose second difference is below 1e-30 in magnitude are
/// returned unchanged from x2.
Vector aitken_accelerate(std::span<const double> x0, std::span<const double> x1,
                         std::span<const double> x2);

struct RootEntry {
  Vector root;
  double alpha = 0.0;  // order that produced `root`
  SolveOutcome outcome;
  std::vector<double> found_by;  // every alpha that converged onto this root, ascending
};

struct SkippedAlpha {
  double alpha = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  std::string reason;
  SolveOutcome outcome;
};

struct RootSet {
  std::vector<RootEntry> roots;  // lexicographic by component
  std::vector<SkippedAlpha> skipped;  // ascending alpha
  double dedup_tolerance = 1e-3;
};

struct SweepSettings {
  SolverSettings solver;  // alpha is overridden per grid point
  double dedup_tolerance = 1e-3;  // relative: ||a-b|| <= tol * max(1, ||a||)
};

/// Grid over [-2, 2] with the given step, dropping points within `band` of an
/// integer.
std::vector<FractionalOrder> default_alpha_grid(double step = 0.05, double band = 0.01);

/// FPN solve for every alpha in the grid from a single x0, grid points run
/// in parallel. The result depends only on the set of grid values.
RootSet alpha_sweep(const ResidualFunction& f, std::span<const double> x0,
                    std::span<const FractionalOrder> grid, const SweepSettings& settings);

/// Reference implementation of alpha_sweep without threading.
RootSet alpha_sweep_serial(const ResidualFunction& f, std::span<const double> x0,
                           std::span<const FractionalOrder> grid,
                           const SweepSettings& settings);

/// Empirical convergence order from error (or step) norms:
///
///   p ~ log(e_{k+1} / e_k) / log(e_k / e_{k-1})
///
/// over the last three entries. Requires a strictly positive, strictly
/// decreasing tail of at least four entries; throws insufficient_data
/// otherwise.
double estimate_order(std::span<const double> errors);

}  // namespace fpn
