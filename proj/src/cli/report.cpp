#include "fpn/cli/report.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace fpn::cli {

std::string format_number(double v) {
  // fmt's default float formatting is shortest round-trip and locale independent.
  return fmt::format("{}", v);
}

CsvRecord make_record(std::optional<int> row, const dixit_pindyck::ThresholdProblem& problem,
                      double alpha, const dixit_pindyck::ThresholdReport& report) {
  CsvRecord r;
  r.row = row;
  r.a6 = problem.constants.a6;
  r.a7 = problem.constants.a7;
  r.x0_1 = problem.x0.at(0);
  r.x0_2 = problem.x0.at(1);
  r.alpha = alpha;
  if (report.solution) {
    r.H = report.solution->H;
    r.L = report.solution->L;
    r.A = report.solution->A;
    r.B = report.solution->B;
  } else if (report.outcome.x_final.size() == 2) {
    r.H = report.outcome.x_final[0];
    r.L = report.outcome.x_final[1];
  }
  r.step_norm = report.outcome.final_step_norm;
  r.residual_norm = report.outcome.final_residual_norm;
  r.iters = report.outcome.iterations;
  r.status = report.outcome.status;
  return r;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

double parse_double(const std::string& field, const char* name) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error(fmt::format("csv: bad number '{}' in column {}", field, name));
  }
  return v;
}

std::optional<double> parse_opt(const std::string& field, const char* name) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, name);
}

int parse_int(const std::string& field, const char* name) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error(fmt::format("csv: bad integer '{}' in column {}", field, name));
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CsvRecord>& records) {
  out << csv_header << '\n';
  for (const auto& r : records) {
    out << (r.row ? std::to_string(*r.row) : std::string()) << ',' << format_number(r.a6) << ','
        << format_number(r.a7) << ',' << format_number(r.x0_1) << ',' << format_number(r.x0_2)
        << ',' << format_number(r.alpha) << ',' << opt(r.H) << ',' << opt(r.L) << ',' << opt(r.A)
        << ',' << opt(r.B) << ',' << format_number(r.step_norm) << ','
        << format_number(r.residual_norm) << ',' << r.iters << ',' << to_string(r.status)
        << '\n';
  }
}

std::vector<CsvRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<CsvRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 14) {
      throw std::runtime_error(fmt::format("csv: expected 14 fields, got {}", f.size()));
    }
    CsvRecord r;
    if (!f[0].empty()) r.row = parse_int(f[0], "row");
    r.a6 = parse_double(f[1], "a6");
    r.a7 = parse_double(f[2], "a7");
    r.x0_1 = parse_double(f[3], "x0_1");
    r.x0_2 = parse_double(f[4], "x0_2");
    r.alpha = parse_double(f[5], "alpha");
    r.H = parse_opt(f[6], "H");
    r.L = parse_opt(f[7], "L");
    r.A = parse_opt(f[8], "A");
    r.B = parse_opt(f[9], "B");
    r.step_norm = parse_double(f[10], "step_norm");
    r.residual_norm = parse_double(f[11], "residual_norm");
    r.iters = parse_int(f[12], "iters");
    const auto status = parse_status(f[13]);
    if (!status) throw std::runtime_error(fmt::format("csv: unknown status '{}'", f[13]));
    r.status = *status;
    out.push_back(r);
  }
  return out;
}

nlohmann::ordered_json to_json(const SolveOutcome& outcome) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(outcome.status));
  j["x_final"] = outcome.x_final;
  j["iterations"] = outcome.iterations;
  j["final_step_norm"] = outcome.final_step_norm;
  j["final_residual_norm"] = outcome.final_residual_norm;
  if (!outcome.message.empty()) j["message"] = outcome.message;
  if (outcome.trace) {
    j["trace"] = {{"iterates", outcome.trace->iterates},
                  {"step_norms", outcome.trace->step_norms},
                  {"residual_norms", outcome.trace->residual_norms}};
  }
  return j;
}

SolveOutcome outcome_from_json(const nlohmann::ordered_json& j) {
  SolveOutcome o;
  const auto status = parse_status(j.at("status").get<std::string>());
  if (!status) throw std::runtime_error("json: unknown status");
  o.status = *status;
  o.x_final = j.at("x_final").get<Vector>();
  o.iterations = j.at("iterations").get<int>();
  o.final_step_norm = j.at("final_step_norm").get<double>();
  o.final_residual_norm = j.at("final_residual_norm").get<double>();
  if (j.contains("message")) o.message = j["message"].get<std::string>();
  if (j.contains("trace")) {
    IterationTrace t;
    t.iterates = j["trace"].at("iterates").get<std::vector<Vector>>();
    t.step_norms = j["trace"].at("step_norms").get<std::vector<double>>();
    t.residual_norms = j["trace"].at("residual_norms").get<std::vector<double>>();
    o.trace = std::move(t);
  }
  return o;
}

nlohmann::ordered_json to_json(const dixit_pindyck::ThresholdProblem& problem, double alpha,
                               const dixit_pindyck::ThresholdReport& report) {
  const auto& k = problem.constants;
  nlohmann::ordered_json j;
  j["scenario"] = {{"a1", k.a1}, {"a2", k.a2}, {"a3", k.a3}, {"a4", k.a4}, {"a5", k.a5},
                   {"a6", k.a6}, {"a7", k.a7}, {"x0", problem.x0},        {"alpha", alpha}};
  j["outcome"] = to_json(report.outcome);
  if (report.solution) {
    const auto& s = *report.solution;
    j["solution"] = {{"H", s.H},
                     {"L", s.L},
                     {"A", s.A},
                     {"B", s.B},
                     {"reduced_residual_norm", s.reduced_residual_norm},
                     {"full_residual_norm", s.full_residual_norm}};
  } else {
    j["solution"] = nullptr;
  }
  j["warnings"] = report.warnings;
  return j;
}

nlohmann::ordered_json to_json(const RootSet& roots) {
  nlohmann::ordered_json j;
  j["dedup_tolerance"] = roots.dedup_tolerance;
  j["roots"] = nlohmann::ordered_json::array();
  for (const auto& r : roots.roots) {
    j["roots"].push_back({{"root", r.root},
                          {"alpha", r.alpha},
                          {"found_by", r.found_by},
                          {"outcome", to_json(r.outcome)}});
  }
  j["skipped"] = nlohmann::ordered_json::array();
  for (const auto& s : roots.skipped) {
    j["skipped"].push_back(
        {{"alpha", s.alpha}, {"status", std::string(to_string(s.status))}, {"reason", s.reason}});
  }
  return j;
}

void write_table(std::ostream& out, const dixit_pindyck::ThresholdProblem& problem, double alpha,
                 const dixit_pindyck::ThresholdReport& report) {
  const auto& k = problem.constants;
  const auto& o = report.outcome;
  out << fmt::format("a6 = {}   a7 = {}   x0 = ({}, {})   alpha = {}\n", format_number(k.a6),
                     format_number(k.a7), format_number(problem.x0.at(0)),
                     format_number(problem.x0.at(1)), format_number(alpha));
  out << fmt::format("status        {}\n", to_string(o.status));
  if (!o.message.empty()) out << fmt::format("message       {}\n", o.message);
  if (report.solution) {
    const auto& s = *report.solution;
    out << fmt::format("H             {:.8f}\n", s.H);
    out << fmt::format("L             {:.8f}\n", s.L);
    out << fmt::format("A             {:.10e}\n", s.A);
    out << fmt::format("B             {:.10e}\n", s.B);
    out << fmt::format("|f(x_n)|      {:.6e}\n", s.reduced_residual_norm);
    out << fmt::format("|F(H,L,A,B)|  {:.6e}\n", s.full_residual_norm);
  } else if (o.x_final.size() == 2) {
    out << fmt::format("x_final       ({:.8f}, {:.8f})\n", o.x_final[0], o.x_final[1]);
    out << fmt::format("|f(x_n)|      {:.6e}\n", o.final_residual_norm);
  }
  out << fmt::format("|x_n-x_n-1|   {:.6e}\n", o.final_step_norm);
  out << fmt::format("iterations    {}\n", o.iterations);
  for (const auto& w : report.warnings) out << "warning       " << w << '\n';
  if (o.trace) {
    out << "\n    i                     x1                     x2        |step|    |f(x)|\n";
    for (std::size_t i = 0; i < o.trace->iterates.size(); ++i) {
      const auto& x = o.trace->iterates[i];
      const double step = i == 0 ? 0.0 : o.trace->step_norms[i - 1];
      out << fmt::format("{:5d} {:22.12f} {:22.12f} {:13.6e} {:13.6e}\n", i, x.at(0),
                         x.size() > 1 ? x[1] : 0.0, step, o.trace->residual_norms[i]);
    }
  }
}

}  // namespace fpn::cli
