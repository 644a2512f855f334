#include "run_config.hpp"

#include <fstream>
#include <set>

#include "rbeig/errors.hpp"

namespace rbeig::app {

using nlohmann::json;

std::string to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::toycore: return "toycore";
    case ProblemKind::synthetic_minicore: return "synthetic_minicore";
    case ProblemKind::external: return "external";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& name) {
  if (name == "toycore") return ProblemKind::toycore;
  if (name == "synthetic_minicore") return ProblemKind::synthetic_minicore;
  if (name == "external") return ProblemKind::external;
  throw ConfigError("unknown problem '" + name + "'");
}

namespace {

std::string bc_name(BoundaryCondition bc) { return bc == BoundaryCondition::robin ? "robin" : "dirichlet"; }

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "dirichlet") return BoundaryCondition::dirichlet;
  if (s == "robin") return BoundaryCondition::robin;
  throw ConfigError("unknown boundary condition '" + s + "'");
}

std::string norm_name(GramKind g) { return g == GramKind::mass ? "mass" : "identity"; }

GramKind parse_norm(const std::string& s) {
  if (s == "identity") return GramKind::identity;
  if (s == "mass") return GramKind::mass;
  throw ConfigError("unknown norm '" + s + "'");
}

std::string fission_name(FissionOperator f) { return f == FissionOperator::identity ? "identity" : "assembled"; }

FissionOperator parse_fission(const std::string& s) {
  if (s == "assembled") return FissionOperator::assembled;
  if (s == "identity") return FissionOperator::identity;
  throw ConfigError("unknown fission operator '" + s + "'");
}

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig RunConfig::defaults(ProblemKind problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == ProblemKind::synthetic_minicore) {
    c.cells_per_side = 35;
    c.bc = BoundaryCondition::robin;
    c.selector = Selector::residual_sum;
    c.pod_snapshots = 5;
    c.pod_dim = 10;
    c.n_train = 100;
    c.n_test = 20;
  }
  return c;
}

PowerIterationSettings RunConfig::solver_settings() const {
  PowerIterationSettings s;
  s.tau_u = tau_u;
  s.tau_lambda = tau_lambda;
  s.max_iterations = max_iterations;
  s.seed = solver_seed;
  return s;
}

GreedyConfig RunConfig::greedy_config() const {
  GreedyConfig g;
  g.tolerance = tolerance;
  g.selector = selector;
  g.max_dim = max_dim;
  g.pod_snapshots = pod_snapshots;
  g.pod_dim = pod_dim;
  g.workers = workers;
  g.reduced_settings = solver_settings();
  return g;
}

void RunConfig::validate() const {
  if (problem == ProblemKind::external) {
    if (external_A.empty() || external_B.empty()) throw ConfigError("external problem needs external_A and external_B");
    return;
  }
  if (cells_per_side < 1) throw ConfigError("cells_per_side must be positive");
  if (n_train == 0 || n_test == 0) throw ConfigError("n_train and n_test must be positive");
  if (selector == Selector::calibrated_k && n_pref == 0) throw ConfigError("calibrated_k needs n_pref > 0");
  if (curve_step < 1) throw ConfigError("curve_step must be positive");
  if (workers < 1) throw ConfigError("workers must be positive");
  greedy_config().validate();
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "problem", "cells_per_side", "bc", "external_A", "external_B", "n_train", "n_test", "n_pref", "seed",
      "tolerance", "selector", "max_dim", "pod_snapshots", "pod_dim", "tau_u", "tau_lambda", "max_iterations",
      "solver_seed", "norm", "fission", "curve_step", "workers", "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  std::string problem = "toycore";
  take(j, "problem", problem);
  RunConfig c = RunConfig::defaults(parse_problem(problem));

  std::string s;
  take(j, "cells_per_side", c.cells_per_side);
  if (j.contains("bc")) {
    take(j, "bc", s);
    c.bc = parse_bc(s);
  }
  take(j, "external_A", c.external_A);
  take(j, "external_B", c.external_B);
  take(j, "n_train", c.n_train);
  take(j, "n_test", c.n_test);
  take(j, "n_pref", c.n_pref);
  take(j, "seed", c.seed);
  take(j, "tolerance", c.tolerance);
  if (j.contains("selector")) {
    take(j, "selector", s);
    c.selector = parse_selector(s);
  }
  take(j, "max_dim", c.max_dim);
  take(j, "pod_snapshots", c.pod_snapshots);
  take(j, "pod_dim", c.pod_dim);
  take(j, "tau_u", c.tau_u);
  take(j, "tau_lambda", c.tau_lambda);
  take(j, "max_iterations", c.max_iterations);
  take(j, "solver_seed", c.solver_seed);
  if (j.contains("norm")) {
    take(j, "norm", s);
    c.norm = parse_norm(s);
  }
  if (j.contains("fission")) {
    take(j, "fission", s);
    c.fission = parse_fission(s);
  }
  take(j, "curve_step", c.curve_step);
  take(j, "workers", c.workers);
  take(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  return json{{"problem", to_string(c.problem)},
              {"cells_per_side", c.cells_per_side},
              {"bc", bc_name(c.bc)},
              {"external_A", c.external_A},
              {"external_B", c.external_B},
              {"n_train", c.n_train},
              {"n_test", c.n_test},
              {"n_pref", c.n_pref},
              {"seed", c.seed},
              {"tolerance", c.tolerance},
              {"selector", to_string(c.selector)},
              {"max_dim", c.max_dim},
              {"pod_snapshots", c.pod_snapshots},
              {"pod_dim", c.pod_dim},
              {"tau_u", c.tau_u},
              {"tau_lambda", c.tau_lambda},
              {"max_iterations", c.max_iterations},
              {"solver_seed", c.solver_seed},
              {"norm", norm_name(c.norm)},
              {"fission", fission_name(c.fission)},
              {"curve_step", c.curve_step},
              {"workers", c.workers},
              {"output_dir", c.output_dir}};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << config_to_json(c).dump(2) << '\n';
}

}  // namespace rbeig::app
