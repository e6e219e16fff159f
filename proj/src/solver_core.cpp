#include "fpn/solver_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "fpn/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace fpn {

void SolverSettings::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(tol_step > 0.0)) throw std::invalid_argument("tol_step must be positive");
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(divergence_bound > 0.0)) throw std::invalid_argument("divergence_bound must be positive");
}

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::converged: return "Converged";
    case SolveStatus::max_iterations: return "MaxIterations";
    case SolveStatus::diverged: return "Diverged";
    case SolveStatus::evaluation_failed: return "EvaluationFailed";
  }
  return "Unknown";
}

std::optional<SolveStatus> parse_status(std::string_view text) noexcept {
  for (auto s : {SolveStatus::converged, SolveStatus::max_iterations, SolveStatus::diverged,
                 SolveStatus::evaluation_failed}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

double norm2(std::span<const double> v) noexcept {
  double sum = 0.0;
  for (double c : v) sum += c * c;
  return std::sqrt(sum);
}

double distance2(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Vector fpn_update(std::span<const double> x, std::span<const double> fx,
                  FractionalOrder alpha, double epsilon) {
  if (fx.size() != x.size()) {
    throw std::invalid_argument("residual length differs from iterate length");
  }
  const PDiagonal p = p_matrix(alpha, x, epsilon);
  Vector next(x.begin(), x.end());
  for (std::size_t k = 0; k < next.size(); ++k) next[k] -= p.entries[k] * fx[k];
  return next;
}

Vector fpn_step(const ResidualFunction& f, std::span<const double> x,
                FractionalOrder alpha, double epsilon) {
  const Vector fx = f(x);
  return fpn_update(x, fx, alpha, epsilon);
}

IterationFunction make_fpn_iteration(FractionalOrder alpha, double epsilon) {
  return [alpha, epsilon](std::span<const double> x, std::span<const double> fx) {
    return fpn_update(x, fx, alpha, epsilon);
  };
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

}  // namespace

SolveOutcome fixed_point_solve(const IterationFunction& step, const ResidualFunction& f,
                               std::span<const double> x0, const SolverSettings& settings) {
  settings.validate();

  SolveOutcome out;
  if (settings.record_trace) out.trace.emplace();

  Vector x(x0.begin(), x0.end());
  Vector fx;
  out.x_final = x;
  try {
    fx = f(x);
  } catch (const evaluation_failed& e) {
    out.status = SolveStatus::evaluation_failed;
    out.message = fmt::format("residual undefined at x0: {}", e.what());
    return out;
  }
  out.final_residual_norm = norm2(fx);
  if (out.trace) {
    out.trace->iterates.push_back(x);
    out.trace->residual_norms.push_back(out.final_residual_norm);
  }

  // Raw iterates since the last Aitken restart.
  std::vector<Vector> window;
  if (settings.aitken) window.push_back(x);

  for (int i = 1; i <= settings.max_iter; ++i) {
    Vector next;
    Vector f_next;
    bool have_f_next = false;
    try {
      next = step(x, fx);
    } catch (const evaluation_failed& e) {
      out.status = SolveStatus::evaluation_failed;
      out.message = fmt::format("iteration {}: {}", i, e.what());
      return out;
    } catch (const singular_jacobian& e) {
      out.status = SolveStatus::evaluation_failed;
      out.message = fmt::format("iteration {}: {}", i, e.what());
      return out;
    }

    if (settings.aitken && all_finite(next)) {
      window.push_back(next);
      if (window.size() == 3) {
        Vector accelerated = aitken_accelerate(window[0], window[1], window[2]);
        if (all_finite(accelerated)) {
          try {
            f_next = f(accelerated);
            next = std::move(accelerated);
            have_f_next = true;
          } catch (const evaluation_failed&) {
            // keep the raw iterate
          }
        }
        window.assign(1, next);
      }
    }

    out.iterations = i;
    if (!all_finite(next) || norm2(next) > settings.divergence_bound) {
      out.status = SolveStatus::diverged;
      out.x_final = std::move(next);
      out.message = fmt::format("iterate left the bound {} at iteration {}",
                                settings.divergence_bound, i);
      return out;
    }

    if (!have_f_next) {
      try {
        f_next = f(next);
      } catch (const evaluation_failed& e) {
        out.status = SolveStatus::evaluation_failed;
        out.x_final = std::move(next);
        out.message = fmt::format("iteration {}: {}", i, e.what());
        return out;
      }
    }

    const double step_norm = distance2(next, x);
    const double residual_norm = norm2(f_next);
    x = std::move(next);
    fx = std::move(f_next);
    out.x_final = x;
    out.final_step_norm = step_norm;
    out.final_residual_norm = residual_norm;
    if (out.trace) {
      out.trace->iterates.push_back(x);
      out.trace->step_norms.push_back(step_norm);
      out.trace->residual_norms.push_back(residual_norm);
    }

    if (step_norm <= settings.tol_step && residual_norm <= settings.tol_residual) {
      out.status = SolveStatus::converged;
      return out;
    }
  }

  out.status = SolveStatus::max_iterations;
  out.message = fmt::format("no convergence after {} iterations", settings.max_iter);
  return out;
}

SolveOutcome fpn_solve(const ResidualFunction& f, std::span<const double> x0,
                       const SolverSettings& settings) {
  return fixed_point_solve(make_fpn_iteration(settings.alpha, settings.epsilon), f, x0,
                           settings);
}

Eigen::MatrixXd fd_jacobian(const ResidualFunction& f, std::span<const double> x,
                            std::optional<double> h) {
  const auto n = static_cast<Eigen::Index>(x.size());
  double inf_norm = 0.0;
  for (double c : x) inf_norm = std::max(inf_norm, std::abs(c));
  const double step = h.value_or(std::max(1e-6, 1e-8 * inf_norm));

  Eigen::MatrixXd jac(n, n);
  Vector probe(x.begin(), x.end());
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    probe[kk] = x[kk] + step;
    const Vector plus = f(probe);
    probe[kk] = x[kk] - step;
    const Vector minus = f(probe);
    probe[kk] = x[kk];
    if (plus.size() != x.size() || minus.size() != x.size()) {
      throw std::invalid_argument("residual length differs from iterate length");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      jac(j, k) = (plus[jj] - minus[jj]) / (2.0 * step);
    }
  }
  return jac;
}

namespace {

Vector newton_update(const ResidualFunction& f, std::span<const double> x,
                     std::span<const double> fx) {
  const Eigen::MatrixXd jac = fd_jacobian(f, x);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-12)) {
    throw singular_jacobian(fmt::format("Jacobian is singular (rcond {:.3g})", rcond));
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(fx.data(), static_cast<Eigen::Index>(fx.size()));
  const Eigen::VectorXd delta = lu.solve(rhs);
  Vector next(x.begin(), x.end());
  for (std::size_t k = 0; k < next.size(); ++k) {
    next[k] -= delta(static_cast<Eigen::Index>(k));
  }
  return next;
}

}  // namespace

Vector newton_step(const ResidualFunction& f, std::span<const double> x) {
  const Vector fx = f(x);
  return newton_update(f, x, fx);
}

SolveOutcome newton_solve(const ResidualFunction& f, std::span<const double> x0,
                          const SolverSettings& settings) {
  IterationFunction step = [&f](std::span<const double> x, std::span<const double> fx) {
    return newton_update(f, x, fx);
  };
  return fixed_point_solve(step, f, x0, settings);
}

Vector aitken_accelerate(std::span<const double> x0, std::span<const double> x1,
                         std::span<const double> x2) {
  if (x1.size() != x0.size() || x2.size() != x0.size()) {
    throw std::invalid_argument("aitken_accelerate needs three vectors of equal length");
  }
  Vector out(x2.begin(), x2.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double denom = x2[k] - 2.0 * x1[k] + x0[k];
    if (std::abs(denom) < 1e-30) continue;
    const double d = x1[k] - x0[k];
    out[k] = x0[k] - d * d / denom;
  }
  return out;
}

std::vector<FractionalOrder> default_alpha_grid(double step, double band) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<FractionalOrder> grid;
  for (long k = 0;; ++k) {
    // Snap to 1e-12 so values like 0.35 print cleanly.
    const double value = std::round((-2.0 + static_cast<double>(k) * step) * 1e12) / 1e12;
    if (value > 2.0) break;
    if (std::abs(value - std::nearbyint(value)) <= band) continue;
    if (!FractionalOrder::is_valid(value)) continue;
    grid.emplace_back(value);
  }
  return grid;
}

namespace {

struct SweepPoint {
  double alpha;
  SolveOutcome outcome;
};

SolveOutcome solve_at(const ResidualFunction& f, std::span<const double> x0,
                      FractionalOrder alpha, const SolverSettings& base) {
  SolverSettings s = base;
  s.alpha = alpha;
  return fpn_solve(f, x0, s);
}

RootSet collect_roots(std::vector<SweepPoint> points, double dedup_tolerance) {
  RootSet set;
  set.dedup_tolerance = dedup_tolerance;

  std::vector<SweepPoint> hits;
  for (auto& p : points) {
    if (p.outcome.converged()) {
      hits.push_back(std::move(p));
    } else {
      set.skipped.push_back({p.alpha, p.outcome.status, p.outcome.message, std::move(p.outcome)});
    }
  }
  std::sort(set.skipped.begin(), set.skipped.end(),
            [](const SkippedAlpha& a, const SkippedAlpha& b) { return a.alpha < b.alpha; });

  // A total order over the hits makes the clustering below independent of the
  // order grid points were solved in.
  std::sort(hits.begin(), hits.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return std::tie(a.outcome.x_final, a.alpha) < std::tie(b.outcome.x_final, b.alpha);
  });

  for (auto& hit : hits) {
    auto same = std::find_if(set.roots.begin(), set.roots.end(), [&](const RootEntry& r) {
      return distance2(r.root, hit.outcome.x_final) <=
             dedup_tolerance * std::max(1.0, norm2(r.root));
    });
    if (same != set.roots.end()) {
      same->found_by.push_back(hit.alpha);
      continue;
    }
    RootEntry entry;
    entry.root = hit.outcome.x_final;
    entry.alpha = hit.alpha;
    entry.found_by.push_back(hit.alpha);
    entry.outcome = std::move(hit.outcome);
    set.roots.push_back(std::move(entry));
  }
  for (auto& r : set.roots) std::sort(r.found_by.begin(), r.found_by.end());
  return set;
}

}  // namespace

RootSet alpha_sweep(const ResidualFunction& f, std::span<const double> x0,
                    std::span<const FractionalOrder> grid, const SweepSettings& settings) {
  settings.solver.validate();
  std::vector<SweepPoint> points(grid.size());
  const auto count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    points[idx] = {grid[idx].value(), solve_at(f, x0, grid[idx], settings.solver)};
  }
  return collect_roots(std::move(points), settings.dedup_tolerance);
}

RootSet alpha_sweep_serial(const ResidualFunction& f, std::span<const double> x0,
                           std::span<const FractionalOrder> grid,
                           const SweepSettings& settings) {
  settings.solver.validate();
  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (const auto alpha : grid) {
    points.push_back({alpha.value(), solve_at(f, x0, alpha, settings.solver)});
  }
  return collect_roots(std::move(points), settings.dedup_tolerance);
}

double estimate_order(std::span<const double> errors) {
  std::size_t tail = 0;
  for (std::size_t i = errors.size(); i-- > 0;) {
    const double e = errors[i];
    if (!(e > 0.0) || !std::isfinite(e)) break;
    if (tail > 0 && !(e > errors[i + 1])) break;
    ++tail;
  }
  if (tail < 4) {
    throw insufficient_data(fmt::format(
        "need a strictly decreasing positive tail of at least 4 norms, have {}", tail));
  }
  const std::size_t k = errors.size() - 2;
  return std::log(errors[k + 1] / errors[k]) / std::log(errors[k] / errors[k - 1]);
}

}  // namespace fpn
