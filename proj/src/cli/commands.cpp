#include "fpn/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fpn/cli/report.hpp"
#include "fpn/dixit_pindyck.hpp"
#include "fpn/errors.hpp"
#include "fpn/reference_data.hpp"

namespace fpn::cli {

namespace dp = dixit_pindyck;

namespace {

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << fmt::format("error: cannot write {}\n", path);
    return false;
  }
  f << content;
  return static_cast<bool>(f);
}

double rel_dev(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

std::string render(OutputFormat format, const dp::ThresholdProblem& problem, double alpha,
                   const dp::ThresholdReport& report) {
  std::ostringstream s;
  switch (format) {
    case OutputFormat::table:
      write_table(s, problem, alpha, report);
      break;
    case OutputFormat::csv:
      write_csv(s, {make_record(1, problem, alpha, report)});
      break;
    case OutputFormat::structured:
      s << to_json(problem, alpha, report).dump(2) << '\n';
      break;
  }
  return s.str();
}

}  // namespace

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  dp::ThresholdProblem problem;
  SolverSettings settings;
  try {
    cfg = load_config(opts.config_path);
    if (opts.alpha) cfg.alpha = *opts.alpha;
    if (opts.epsilon) cfg.solver.epsilon = *opts.epsilon;
    if (opts.max_iter) cfg.solver.max_iter = *opts.max_iter;
    if (opts.trace) cfg.trace = true;
    if (opts.format) cfg.format = *opts.format;
    problem = cfg.problem();
    settings = cfg.resolve_solver();
    settings.validate();
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  const auto report = dp::solve_thresholds(problem, settings);
  const double alpha = settings.alpha.value();

  if (opts.out_path) {
    out << render(OutputFormat::table, problem, alpha, report);
    if (!write_file(*opts.out_path, render(cfg.format, problem, alpha, report), err)) {
      return exit_usage;
    }
  } else {
    out << render(cfg.format, problem, alpha, report);
  }
  if (!report.outcome.converged()) {
    err << fmt::format("solve did not converge: {} ({})\n", to_string(report.outcome.status),
                       report.outcome.message);
    return exit_not_converged;
  }
  return exit_ok;
}

int cmd_reproduce_tables(const ReproduceOptions& opts, std::ostream& out, std::ostream& err) {
  const auto structural = dp::reference_structural_constants();

  std::vector<dp::ThresholdCase> cases;
  for (const auto& row : reference::threshold_rows) {
    dp::ThresholdCase c;
    c.problem.constants = structural;
    c.problem.constants.a6 = row.a6;
    c.problem.constants.a7 = row.a7;
    c.problem.x0 = {row.h0, row.l0};
    c.settings.alpha = FractionalOrder(row.alpha);
    c.settings.epsilon = reference::reference_epsilon;
    cases.push_back(std::move(c));
  }

  bool all_ok = true;

  out << "Initial residuals (structural constants a1..a5 = 0.5355, 1.5808, 1.5355, 0.5808, "
         "18.9753)\n";
  out << fmt::format("{:>3} {:>8} {:>8} {:>6} {:>6} {:>16} {:>12} {:>10} {}\n", "row", "a6", "a7",
                     "H0", "L0", "|f(x0)|", "reference", "rel.dev", "check");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& row = reference::threshold_rows[i];
    const auto& p = cases[i].problem;
    double norm = std::nan("");
    bool ok = false;
    try {
      norm = norm2(dp::reduced_residual(p.constants, p.x0));
      ok = rel_dev(norm, row.residual_x0) <= 1e-5;
    } catch (const evaluation_failed& e) {
      err << fmt::format("row {}: {}\n", row.row, e.what());
    }
    all_ok = all_ok && ok;
    out << fmt::format("{:>3} {:>8} {:>8} {:>6} {:>6} {:>16.6f} {:>12.5e} {:>10.2e} {}\n",
                       row.row, row.a6, row.a7, row.h0, row.l0, norm, row.residual_x0,
                       rel_dev(norm, row.residual_x0), ok ? "ok" : "FAIL");
  }

  const auto reports = dp::solve_thresholds_batch(cases);

  out << fmt::format("\nSolutions (epsilon = {})\n", format_number(reference::reference_epsilon));
  out << fmt::format("{:>3} {:>8} {:>16} {:>9} {:>16} {:>9} {:>12} {:>12} {:>5} {:>5} {}\n", "row",
                     "alpha", "H", "rel.dev", "L", "rel.dev", "|x_n-x_n-1|", "|f(x_n)|", "n",
                     "ref.n", "check");
  std::vector<CsvRecord> records;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& row = reference::threshold_rows[i];
    const auto& r = reports[i];
    const auto& o = r.outcome;
    const double H = r.solution ? r.solution->H : std::nan("");
    const double L = r.solution ? r.solution->L : std::nan("");
    const bool ok = o.converged() && rel_dev(H, row.H) <= 1e-4 && rel_dev(L, row.L) <= 1e-4 &&
                    o.final_residual_norm <= 1e-4 && o.iterations <= 300;
    all_ok = all_ok && ok;
    out << fmt::format(
        "{:>3} {:>8} {:>16.8f} {:>9.2e} {:>16.8f} {:>9.2e} {:>12.5e} {:>12.5e} {:>5} {:>5} {}\n",
        row.row, format_number(row.alpha), H, rel_dev(H, row.H), L, rel_dev(L, row.L),
        o.final_step_norm, o.final_residual_norm, o.iterations, row.iterations,
        ok ? "ok" : "FAIL");
    records.push_back(make_record(row.row, cases[i].problem, row.alpha, r));
  }

  if (opts.out_path) {
    std::ostringstream csv;
    write_csv(csv, records);
    if (!write_file(*opts.out_path, csv.str(), err)) return exit_usage;
  }

  out << (all_ok ? "\nall reference checks passed\n" : "\nreference checks FAILED\n");
  return all_ok ? exit_ok : exit_not_converged;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  dp::ThresholdProblem problem;
  std::vector<FractionalOrder> grid;
  try {
    cfg = load_config(opts.config_path);
    if (opts.grid_step) {
      if (!(*opts.grid_step > 0.0)) throw config_error("--grid-step must be positive");
      cfg.grid_step = *opts.grid_step;
      cfg.alphas.reset();
    }
    problem = cfg.problem();
    grid = cfg.sweep_grid();
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  if (grid.empty()) {
    err << "error: sweep grid is empty after removing near-integer orders\n";
    return exit_usage;
  }

  SweepSettings sweep;
  sweep.solver = cfg.solver;
  sweep.dedup_tolerance = cfg.dedup_tolerance;
  const auto f = dp::make_reduced_residual(problem.constants);
  const RootSet roots = alpha_sweep(f, problem.x0, grid, sweep);

  out << fmt::format("alpha sweep: {} orders from x0 = ({}, {}), {} distinct roots\n", grid.size(),
                     format_number(problem.x0[0]), format_number(problem.x0[1]),
                     roots.roots.size());
  std::vector<CsvRecord> records;
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const auto& r = roots.roots[i];
    std::string alphas;
    for (double a : r.found_by) alphas += (alphas.empty() ? "" : " ") + format_number(a);
    out << fmt::format("root {}: ({:.8f}, {:.8f})  |f| = {:.3e}  found by alpha: {}\n", i + 1,
                       r.root[0], r.root[1], r.outcome.final_residual_norm, alphas);
    dp::ThresholdReport rep;
    rep.outcome = r.outcome;
    records.push_back(make_record(static_cast<int>(i + 1), problem, r.alpha, rep));
  }
  for (const auto& s : roots.skipped) {
    out << fmt::format("skipped alpha {}: {} ({})\n", format_number(s.alpha), to_string(s.status),
                       s.reason);
    dp::ThresholdReport rep;
    rep.outcome = s.outcome;
    records.push_back(make_record(std::nullopt, problem, s.alpha, rep));
  }

  if (opts.out_path) {
    std::ostringstream buf;
    const auto& path = *opts.out_path;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
      buf << to_json(roots).dump(2) << '\n';
    } else {
      write_csv(buf, records);
    }
    if (!write_file(path, buf.str(), err)) return exit_usage;
  }
  return roots.roots.empty() ? exit_not_converged : exit_ok;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional pseudo-Newton root finder and investment threshold solver"};
  app.require_subcommand(1);

  SolveOptions solve;
  std::string solve_format;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one threshold scenario from a config file");
  solve_cmd->add_option("--config", solve.config_path, "Scenario config (YAML)")->required();
  solve_cmd->add_option("--alpha", solve.alpha, "Fractional order, overrides the config");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Regularising epsilon");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap");
  solve_cmd->add_flag("--trace", solve.trace, "Report every iterate");
  solve_cmd->add_option("--out", solve.out_path, "Write the report to this file");
  solve_cmd->add_option("--format", solve_format, "table, csv or structured")
      ->check(CLI::IsMember({"table", "csv", "structured"}));

  ReproduceOptions reproduce;
  auto* reproduce_cmd =
      app.add_subcommand("reproduce-tables", "Recompute the reference threshold tables");
  reproduce_cmd->add_option("--out", reproduce.out_path, "Write recomputed solutions as CSV");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep alpha from one initial condition");
  sweep_cmd->add_option("--config", sweep.config_path, "Scenario config (YAML)")->required();
  sweep_cmd->add_option("--grid-step", sweep.grid_step, "Spacing of the alpha grid over [-2, 2]");
  sweep_cmd->add_option("--out", sweep.out_path, "Write roots (.json) or per-alpha CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (!solve_format.empty()) solve.format = parse_format(solve_format);

  if (*solve_cmd) return cmd_solve(solve, out, err);
  if (*reproduce_cmd) return cmd_reproduce_tables(reproduce, out, err);
  return cmd_sweep(sweep, out, err);
}

}  // namespace fpn::cli
