#include "fpn/dixit_pindyck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "fpn/errors.hpp"

namespace fpn::dixit_pindyck {

namespace {

// x^a for x > 0.
double rpow(double x, double a) { return std::exp(a * std::log(x)); }

void check_domain(std::span<const double> x) {
  if (x.size() != 2) throw std::invalid_argument("threshold system takes exactly two unknowns");
  if (!(x[0] > 0.0) || !(x[1] > 0.0)) {
    throw non_real_evaluation(
        fmt::format("thresholds must be positive, got ({}, {})", x[0], x[1]));
  }
}

double power_gap(const ModelConstants& k, double x1, double x2) {
  const double s = k.a3 + k.a4;
  const double gap = rpow(x1, s) - rpow(x2, s);
  if (std::abs(gap) < 1e-30) {
    throw degenerate_thresholds(
        fmt::format("x1^(a3+a4) equals x2^(a3+a4) at ({}, {})", x1, x2));
  }
  return gap;
}

}  // namespace

void validate(const EconomicPrimitives& p) {
  const double vals[] = {p.mu, p.sigma, p.l, p.c, p.kappa, p.chi};
  for (double v : vals) {
    if (!std::isfinite(v)) throw invalid_primitives("economic primitives must be finite");
  }
  if (!(p.sigma > 0.0)) throw invalid_primitives("sigma must be positive");
  if (!(p.l > 0.0)) throw invalid_primitives("interest rate l must be positive");
  if (!(p.l > p.mu)) throw invalid_primitives("interest rate l must exceed growth rate mu");
  if (p.c < 0.0 || p.kappa < 0.0 || p.chi < 0.0) {
    throw invalid_primitives("costs c, kappa, chi must be non-negative");
  }
}

ModelConstants derive_constants(const EconomicPrimitives& p) {
  validate(p);
  const double s2 = p.sigma * p.sigma;
  const double drift = p.mu / s2;
  ModelConstants k;
  k.rho = std::sqrt((drift - 0.5) * (drift - 0.5) + 2.0 * p.l / s2);
  k.a1 = drift - 0.5 + k.rho;
  k.a2 = -drift + 0.5 + k.rho;
  k.a3 = drift + 0.5 + k.rho;
  k.a4 = -drift - 0.5 + k.rho;
  k.a5 = 1.0 / (p.l - p.mu);
  k.a6 = p.c / p.l + p.kappa;
  k.a7 = p.c / p.l - p.chi;
  return k;
}

ModelConstants reference_structural_constants() {
  ModelConstants k;
  k.a1 = 0.5355;
  k.a2 = 1.5808;
  k.a3 = 1.5355;
  k.a4 = 0.5808;
  k.a5 = 18.9753;
  return k;
}

Vector reduced_residual(const ModelConstants& k, std::span<const double> x) {
  check_domain(x);
  const double x1 = x[0];
  const double x2 = x[1];
  const double denom = k.a1 * k.a2 * power_gap(k, x1, x2);

  const double x1_a3 = rpow(x1, k.a3);
  const double x2_a3 = rpow(x2, k.a3);
  const double gap_a3 = x2_a3 - x1_a3;
  const double gap_a4 = rpow(x1, k.a4) - rpow(x2, k.a4);

  const double n1 = k.a1 * rpow(x1, k.a2) * gap_a3 + k.a2 * x1 * x2_a3 * gap_a4;
  const double n2 = k.a1 * rpow(x2, k.a2) * gap_a3 + k.a2 * x1_a3 * x2 * gap_a4;

  return {k.a5 * x1 - k.a6 + k.a5 * n1 / denom, k.a5 * x2 - k.a7 + k.a5 * n2 / denom};
}

ResidualFunction make_reduced_residual(const ModelConstants& k) {
  return [k](std::span<const double> x) { return reduced_residual(k, x); };
}

Coefficients back_substitute(const ModelConstants& k, std::span<const double> x) {
  check_domain(x);
  const double x1 = x[0];
  const double x2 = x[1];
  const double gap = power_gap(k, x1, x2);
  Coefficients out;
  out.A = k.a5 * (rpow(x1, k.a3) - rpow(x2, k.a3)) / (k.a2 * gap);
  out.B = k.a5 * rpow(x1 * x2, k.a3) * (rpow(x1, k.a4) - rpow(x2, k.a4)) / (k.a1 * gap);
  return out;
}

std::vector<double> full_residual(const ModelConstants& k, double H, double L, double A,
                                  double B) {
  if (!(H > 0.0) || !(L > 0.0)) {
    throw non_real_evaluation(fmt::format("thresholds must be positive, got H={}, L={}", H, L));
  }
  return {
      k.a5 * H + B * rpow(H, -k.a1) - A * rpow(H, k.a2) - k.a6,
      -k.a1 * B * rpow(H, -k.a3) - k.a2 * A * rpow(H, k.a4) + k.a5,
      k.a5 * L + B * rpow(L, -k.a1) - A * rpow(L, k.a2) - k.a7,
      -k.a1 * B * rpow(L, -k.a3) - k.a2 * A * rpow(L, k.a4) + k.a5,
  };
}

double relative_full_residual(const ModelConstants& k, double H, double L, double A, double B) {
  const auto r = full_residual(k, H, L, A, B);
  const double scale =
      1.0 + std::abs(k.a6) + std::abs(k.a7) + 2.0 * std::abs(k.a5) * std::max(H, L);
  return norm2(r) / scale;
}

void ThresholdProblem::validate() const {
  if (x0.size() != 2) throw std::invalid_argument("initial condition must have two entries");
  if (!(constants.a6 > constants.a7)) {
    throw std::invalid_argument(
        fmt::format("a6 ({}) must exceed a7 ({})", constants.a6, constants.a7));
  }
}

ThresholdReport solve_thresholds(const ThresholdProblem& problem, const SolverSettings& settings) {
  problem.validate();
  ThresholdReport report;
  report.outcome = fpn_solve(make_reduced_residual(problem.constants), problem.x0, settings);
  if (!report.outcome.converged()) return report;

  Vector x = report.outcome.x_final;
  if (x[0] < x[1]) {
    report.warnings.push_back("iterates crossed; relabelled so that H >= L");
    std::swap(x[0], x[1]);
  }
  if (!(x[0] > x[1])) report.warnings.push_back("converged point does not satisfy H > L");

  ThresholdSolution sol;
  sol.H = x[0];
  sol.L = x[1];
  const auto ab = back_substitute(problem.constants, x);
  sol.A = ab.A;
  sol.B = ab.B;
  sol.reduced_residual_norm = report.outcome.final_residual_norm;
  sol.full_residual_norm = norm2(full_residual(problem.constants, sol.H, sol.L, sol.A, sol.B));
  report.solution = sol;
  return report;
}

std::vector<ThresholdReport> solve_thresholds_batch(std::span<const ThresholdCase> cases) {
  for (const auto& c : cases) {
    c.problem.validate();
    c.settings.validate();
  }
  std::vector<ThresholdReport> out(cases.size());
  const auto count = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = solve_thresholds(cases[idx].problem, cases[idx].settings);
  }
  return out;
}

std::string_view to_string(Decision d) noexcept {
  switch (d) {
    case Decision::expand: return "Expand";
    case Decision::keep_operating: return "Continue";
    case Decision::reduce_or_close: return "ReduceOrClose";
  }
  return "Unknown";
}

Decision classify_income(double income, const ThresholdSolution& sol) noexcept {
  if (income >= sol.H) return Decision::expand;
  if (income <= sol.L) return Decision::reduce_or_close;
  return Decision::keep_operating;
}

}  // namespace fpn::dixit_pindyck
