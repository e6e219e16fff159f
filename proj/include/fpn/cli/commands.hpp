#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fpn/cli/config.hpp"

namespace fpn::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_not_converged = 2 };

struct SolveOptions {
  std::string config_path;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<int> max_iter;
  bool trace = false;
  std::optional<std::string> out_path;
  std::optional<OutputFormat> format;
};

struct ReproduceOptions {
  std::optional<std::string> out_path;  // CSV of the recomputed solutions
};

struct SweepOptions {
  std::string config_path;
  std::optional<double> grid_step;
  std::optional<std::string> out_path;  // .json gets the structured RootSet, anything else CSV
};

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_reproduce_tables(const ReproduceOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one of the commands above.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fpn::cli
