#include "fpn/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "fpn/errors.hpp"

namespace fpn::cli {

std::optional<OutputFormat> parse_format(std::string_view text) noexcept {
  if (text == "table") return OutputFormat::table;
  if (text == "csv") return OutputFormat::csv;
  if (text == "structured") return OutputFormat::structured;
  return std::nullopt;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field,
                         const std::string& what) const {
    if (at.IsDefined() && at.Mark().line >= 0) {
      throw config_error(
          fmt::format("{}:{}: {}: {}", origin_, at.Mark().line + 1, field, what));
    }
    throw config_error(fmt::format("{}: {}: {}", origin_, field, what));
  }

  double number(const YAML::Node& parent, const std::string& path, const char* key) const {
    const YAML::Node node = parent[key];
    const std::string field = path + "." + key;
    if (!node) fail(parent, field, "missing required field");
    return as_number(node, field);
  }

  double as_number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    double v = 0.0;
    if (!YAML::convert<double>::decode(node, v) || !std::isfinite(v)) {
      fail(node, field, fmt::format("'{}' is not a finite number", node.Scalar()));
    }
    return v;
  }

  void optional_number(const YAML::Node& parent, const std::string& path, const char* key,
                       double& target) const {
    if (parent[key]) target = as_number(parent[key], path + "." + key);
  }

  bool boolean(const YAML::Node& node, const std::string& field) const {
    bool v = false;
    if (!node.IsScalar() || !YAML::convert<bool>::decode(node, v)) {
      fail(node, field, "expected true or false");
    }
    return v;
  }

  void reject_unknown(const YAML::Node& map, const std::string& path,
                      std::set<std::string> allowed) const {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, path.empty() ? key : path + "." + key, "unknown field");
    }
  }

 private:
  std::string origin_;
};

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string_view origin) {
  const Reader r{std::string(origin)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw config_error(fmt::format("{}:{}: syntax error: {}", origin, e.mark.line + 1, e.msg));
  }
  if (!root.IsMap()) throw config_error(fmt::format("{}: top level must be a mapping", origin));
  r.reject_unknown(root, "", {"model", "initial", "solver", "sweep", "output"});

  ScenarioConfig cfg;

  const YAML::Node model = root["model"];
  if (!model) r.fail(root, "model", "missing required section");
  r.reject_unknown(model, "model", {"primitives", "constants"});
  const YAML::Node prim = model["primitives"];
  const YAML::Node consts = model["constants"];
  if (prim && consts) r.fail(model, "model", "give either primitives or constants, not both");
  if (!prim && !consts) r.fail(model, "model", "one of primitives or constants is required");

  if (prim) {
    r.reject_unknown(prim, "model.primitives", {"mu", "sigma", "l", "c", "kappa", "chi"});
    dixit_pindyck::EconomicPrimitives p;
    p.mu = r.number(prim, "model.primitives", "mu");
    p.sigma = r.number(prim, "model.primitives", "sigma");
    p.l = r.number(prim, "model.primitives", "l");
    p.c = r.number(prim, "model.primitives", "c");
    p.kappa = r.number(prim, "model.primitives", "kappa");
    p.chi = r.number(prim, "model.primitives", "chi");
    try {
      dixit_pindyck::validate(p);
    } catch (const invalid_primitives& e) {
      r.fail(prim, "model.primitives", e.what());
    }
    cfg.primitives = p;
  } else {
    r.reject_unknown(consts, "model.constants",
                     {"structural", "a1", "a2", "a3", "a4", "a5", "a6", "a7"});
    dixit_pindyck::ModelConstants k;
    if (consts["structural"]) {
      if (consts["structural"].Scalar() != "reference") {
        r.fail(consts["structural"], "model.constants.structural",
               "only 'reference' is recognised");
      }
      k = dixit_pindyck::reference_structural_constants();
      r.optional_number(consts, "model.constants", "a1", k.a1);
      r.optional_number(consts, "model.constants", "a2", k.a2);
      r.optional_number(consts, "model.constants", "a3", k.a3);
      r.optional_number(consts, "model.constants", "a4", k.a4);
      r.optional_number(consts, "model.constants", "a5", k.a5);
    } else {
      k.a1 = r.number(consts, "model.constants", "a1");
      k.a2 = r.number(consts, "model.constants", "a2");
      k.a3 = r.number(consts, "model.constants", "a3");
      k.a4 = r.number(consts, "model.constants", "a4");
      k.a5 = r.number(consts, "model.constants", "a5");
    }
    k.a6 = r.number(consts, "model.constants", "a6");
    k.a7 = r.number(consts, "model.constants", "a7");
    cfg.constants = k;
  }

  const YAML::Node initial = root["initial"];
  if (!initial) r.fail(root, "initial", "missing required field");
  if (initial.IsSequence()) {
    if (initial.size() != 2) r.fail(initial, "initial", "expected [H0, L0]");
    cfg.x0 = {r.as_number(initial[0], "initial[0]"), r.as_number(initial[1], "initial[1]")};
  } else if (initial.IsMap()) {
    r.reject_unknown(initial, "initial", {"H0", "L0"});
    cfg.x0 = {r.number(initial, "initial", "H0"), r.number(initial, "initial", "L0")};
  } else {
    r.fail(initial, "initial", "expected [H0, L0] or {H0: .., L0: ..}");
  }

  if (const YAML::Node solver = root["solver"]) {
    r.reject_unknown(solver, "solver",
                     {"alpha", "epsilon", "tol_step", "tol_residual", "max_iter",
                      "divergence_bound", "aitken"});
    if (solver["alpha"]) cfg.alpha = r.as_number(solver["alpha"], "solver.alpha");
    r.optional_number(solver, "solver", "epsilon", cfg.solver.epsilon);
    r.optional_number(solver, "solver", "tol_step", cfg.solver.tol_step);
    r.optional_number(solver, "solver", "tol_residual", cfg.solver.tol_residual);
    r.optional_number(solver, "solver", "divergence_bound", cfg.solver.divergence_bound);
    if (solver["max_iter"]) {
      const double v = r.as_number(solver["max_iter"], "solver.max_iter");
      if (v < 1 || v != std::floor(v) || v > 1e9) {
        r.fail(solver["max_iter"], "solver.max_iter", "expected a positive integer");
      }
      cfg.solver.max_iter = static_cast<int>(v);
    }
    if (solver["aitken"]) cfg.solver.aitken = r.boolean(solver["aitken"], "solver.aitken");
    try {
      cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(solver, "solver", e.what());
    }
  }

  if (const YAML::Node sweep = root["sweep"]) {
    r.reject_unknown(sweep, "sweep", {"grid_step", "band", "dedup_tolerance", "alphas"});
    r.optional_number(sweep, "sweep", "grid_step", cfg.grid_step);
    r.optional_number(sweep, "sweep", "band", cfg.band);
    r.optional_number(sweep, "sweep", "dedup_tolerance", cfg.dedup_tolerance);
    if (const YAML::Node alphas = sweep["alphas"]) {
      if (!alphas.IsSequence()) r.fail(alphas, "sweep.alphas", "expected a list of numbers");
      std::vector<double> values;
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        values.push_back(r.as_number(alphas[i], fmt::format("sweep.alphas[{}]", i)));
      }
      cfg.alphas = std::move(values);
    }
    if (!(cfg.grid_step > 0.0)) r.fail(sweep, "sweep.grid_step", "must be positive");
    if (!(cfg.dedup_tolerance > 0.0)) r.fail(sweep, "sweep.dedup_tolerance", "must be positive");
  }

  if (const YAML::Node output = root["output"]) {
    r.reject_unknown(output, "output", {"format", "trace"});
    if (output["format"]) {
      const auto f = parse_format(output["format"].Scalar());
      if (!f) r.fail(output["format"], "output.format", "expected table, csv or structured");
      cfg.format = *f;
    }
    if (output["trace"]) cfg.trace = r.boolean(output["trace"], "output.trace");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(fmt::format("{}: cannot open config file", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

dixit_pindyck::ModelConstants ScenarioConfig::model_constants() const {
  if (primitives) return dixit_pindyck::derive_constants(*primitives);
  if (constants) return *constants;
  throw config_error("model: no primitives or constants");
}

dixit_pindyck::ThresholdProblem ScenarioConfig::problem() const {
  dixit_pindyck::ThresholdProblem p{model_constants(), x0};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(fmt::format("model: {}", e.what()));
  }
  return p;
}

SolverSettings ScenarioConfig::resolve_solver() const {
  if (!alpha) throw config_error("solver.alpha: missing required field");
  if (!FractionalOrder::is_valid(*alpha)) {
    throw config_error(
        fmt::format("solver.alpha: {} must lie in [-2, 2] and be non-integer", *alpha));
  }
  SolverSettings s = solver;
  s.alpha = FractionalOrder(*alpha);
  s.record_trace = trace;
  return s;
}

std::vector<FractionalOrder> ScenarioConfig::sweep_grid() const {
  if (!alphas) return default_alpha_grid(grid_step, band);
  std::vector<FractionalOrder> grid;
  for (double a : *alphas) {
    if (!FractionalOrder::is_valid(a)) continue;
    if (std::abs(a - std::nearbyint(a)) <= band) continue;
    grid.emplace_back(a);
  }
  return grid;
}

}  // namespace fpn::cli
