#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpn/dixit_pindyck.hpp"
#include "fpn/solver_core.hpp"

namespace fpn::cli {

inline constexpr const char* csv_header =
    "row,a6,a7,x0_1,x0_2,alpha,H,L,A,B,step_norm,residual_norm,iters,status";

/// One line of the CSV report. Absent values are written as empty fields.
struct CsvRecord {
  std::optional<int> row;
  double a6 = 0.0;
  double a7 = 0.0;
  double x0_1 = 0.0;
  double x0_2 = 0.0;
  double alpha = 0.0;
  std::optional<double> H, L, A, B;
  double step_norm = 0.0;
  double residual_norm = 0.0;
  int iters = 0;
  SolveStatus status = SolveStatus::max_iterations;

  friend bool operator==(const CsvRecord&, const CsvRecord&) = default;
};

/// Shortest decimal text that reads back to exactly `v`, '.' as separator.
std::string format_number(double v);

CsvRecord make_record(std::optional<int> row, const dixit_pindyck::ThresholdProblem& problem,
                      double alpha, const dixit_pindyck::ThresholdReport& report);

void write_csv(std::ostream& out, const std::vector<CsvRecord>& records);

/// Parses text produced by write_csv. Throws std::runtime_error on malformed input.
std::vector<CsvRecord> read_csv(std::istream& in);

nlohmann::ordered_json to_json(const SolveOutcome& outcome);
SolveOutcome outcome_from_json(const nlohmann::ordered_json& j);

/// Structured report for one threshold solve: scenario, SolveOutcome, solution.
nlohmann::ordered_json to_json(const dixit_pindyck::ThresholdProblem& problem, double alpha,
                               const dixit_pindyck::ThresholdReport& report);

nlohmann::ordered_json to_json(const RootSet& roots);

/// Human-readable summary of a threshold solve.
void write_table(std::ostream& out, const dixit_pindyck::ThresholdProblem& problem, double alpha,
                 const dixit_pindyck::ThresholdReport& report);

}  // namespace fpn::cli
