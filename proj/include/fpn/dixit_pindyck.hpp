#pragma once

// Dixit-Pindyck investment thresholds under a geometric Brownian income.
//
// Unknowns are x = (H, L, A, B): the expansion threshold H, the closing
// threshold L, and the coefficients of the value function. The four
// value-matching / smooth-pasting conditions are
//
//   a5 H + B H^(-a1) - A H^(a2) - a6 = 0
//   -a1 B H^(-a3) - a2 A H^(a4) + a5 = 0
//   a5 L + B L^(-a1) - A L^(a2) - a7 = 0
//   -a1 B L^(-a3) - a2 A L^(a4) + a5 = 0
//
// Eliminating A and B leaves a 2x2 system in (H, L), which is what the
// fractional pseudo-Newton iteration solves.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpn/solver_core.hpp"

namespace fpn::dixit_pindyck {

struct EconomicPrimitives {
  double mu = 0.0;     // mean income growth rate
  double sigma = 0.0;  // income volatility
  double l = 0.0;      // long-run real interest rate
  double c = 0.0;      // annual production cost
  double kappa = 0.0;  // sunk cost of expanding
  double chi = 0.0;    // cost of reducing or closing
};

struct ModelConstants {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0, a6 = 0.0, a7 = 0.0;
  double rho = 0.0;
};

/// Throws invalid_primitives unless sigma > 0, l > 0, l > mu and the cost
/// terms are non-negative.
void validate(const EconomicPrimitives& p);

ModelConstants derive_constants(const EconomicPrimitives& p);

/// Structural constants a1..a5 of the published milk-producer style example
/// (rho is not given there and stays 0).
ModelConstants reference_structural_constants();

/// Reduced residual in (H, L), multiplied through by a5 so both components are
/// in the units of a6 and a7:
///
///   f_1 = a5 x1 - a6 + a5 N1 / D
///   f_2 = a5 x2 - a7 + a5 N2 / D
///
///   D  = a1 a2 (x1^(a3+a4) - x2^(a3+a4))
///   N1 = a1 x1^a2 (x2^a3 - x1^a3) + a2 x1 x2^a3 (x1^a4 - x2^a4)
///   N2 = a1 x2^a2 (x2^a3 - x1^a3) + a2 x1^a3 x2 (x1^a4 - x2^a4)
///
/// Throws non_real_evaluation if a component is <= 0 and
/// degenerate_thresholds when |x1^(a3+a4) - x2^(a3+a4)| < 1e-30.
Vector reduced_residual(const ModelConstants& k, std::span<const double> x);

ResidualFunction make_reduced_residual(const ModelConstants& k);

struct Coefficients {
  double A = 0.0;
  double B = 0.0;
};

/// Recovers (A, B) from a solution of the reduced system. Symmetric in x1, x2.
Coefficients back_substitute(const ModelConstants& k, std::span<const double> x);

/// The four conditions of the full system, evaluated verbatim.
std::vector<double> full_residual(const ModelConstants& k, double H, double L, double A,
                                  double B);

/// ||full_residual|| / (1 + |a6| + |a7| + 2 |a5| max(H, L)).
double relative_full_residual(const ModelConstants& k, double H, double L, double A, double B);

struct ThresholdProblem {
  ModelConstants constants;
  Vector x0;  // (H0, L0)

  /// Throws std::invalid_argument unless x0 has two entries and a6 > a7.
  void validate() const;
};

struct ThresholdSolution {
  double H = 0.0;
  double L = 0.0;
  double A = 0.0;
  double B = 0.0;
  double reduced_residual_norm = 0.0;
  double full_residual_norm = 0.0;
};

struct ThresholdReport {
  SolveOutcome outcome;
  std::optional<ThresholdSolution> solution;  // present iff converged
  std::vector<std::string> warnings;
};

/// FPN solve of the reduced system from problem.x0, then back-substitution
/// and a full-system check. The larger converged component is labelled H.
ThresholdReport solve_thresholds(const ThresholdProblem& problem, const SolverSettings& settings);

struct ThresholdCase {
  ThresholdProblem problem;
  SolverSettings settings;
};

/// Solves independent scenarios in parallel; results keep input order.
std::vector<ThresholdReport> solve_thresholds_batch(std::span<const ThresholdCase> cases);

enum class Decision { expand, keep_operating, reduce_or_close };

std::string_view to_string(Decision d) noexcept;

/// Expand if income >= H, reduce or close if income <= L, otherwise continue.
Decision classify_income(double income, const ThresholdSolution& sol) noexcept;

}  // namespace fpn::dixit_pindyck
