#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "accelode/objectives.hpp"
#include "accelode/schemes.hpp"

namespace accelode {

/// One value in an experiment file: a double-quoted string, a number, or a
/// bare boolean.
struct ConfigValue {
  enum class Kind { STRING, NUMBER, BOOLEAN };
  Kind kind = Kind::STRING;
  std::string text;     // set when STRING
  double number = 0.0;  // set when NUMBER
  bool truth = false;   // set when BOOLEAN
};

/// Parsed file contents: section name -> key -> value, both levels ordered so
/// error reporting and serialization are deterministic.
using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

/// Minimal TOML-style reader covering exactly what experiment files need:
/// `[section]` headers, `key = value` assignments, `#` comments, blank lines,
/// double-quoted strings (with \" \\ \n \t escapes), numbers, and true/false.
/// Duplicate sections or keys, assignments outside a section, and anything
/// else are std::invalid_argument errors carrying the line number.
ConfigTable parse_config_text(const std::string& text);

/// The `[objective]` section. Defaults reproduce the canonical desk-scale
/// instances; keys that do not apply to the chosen kind are rejected.
struct ObjectiveConfig {
  std::string kind = "quadratic";  // quadratic | logistic | log-sum-exp
  int dim = 10;                    // 5 by default for the derived kinds
  double mu = 0.01;                // quadratic only
  double lipschitz = 1.0;          // quadratic only ("L" in the file)
  std::uint64_t seed = 11;
  int samples = 50;                // logistic only
  double reg = 0.1;                // logistic only
  double sharpness = 1.0;          // log-sum-exp only
  std::uint64_t x0_seed = 9;
  std::string start = "offset";    // offset (x* + unit vector) | minimizer
};

/// The `[scheme]` section; `step_size = "theorem"` selects the certified
/// step for the (family, rule) pair when one exists.
struct SchemeConfig {
  OdeFamily family = OdeFamily::SC_HR;
  SchemeRule rule = SchemeRule::SYMPLECTIC;
  bool theorem_step = true;  // step_size = "theorem"
  double step_size = 0.0;    // set when numeric
};

/// The `[run]` section.
struct RunConfig {
  long iterations = 500;
  long record_every = 1;
};

/// The `[checks]` section; horizon/h configure the continuous-flow
/// integration (h = 0 means derive the step from the integrator's cap).
struct ChecksConfig {
  bool lyapunov = false;
  bool bounds = false;
  bool flow_compare = false;
  double horizon = 10.0;
  double h = 0.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ObjectiveConfig objective;
  SchemeConfig scheme;
  RunConfig run;
  ChecksConfig checks;
};

/// Validates a parsed table against the experiment schema: known sections and
/// keys only, types as declared, values in range, the scheme admissible, and
/// a "theorem" step resolvable for the pair. Every section and key is
/// optional; omissions keep the canonical defaults.
ExperimentConfig config_from_table(const ConfigTable& table, const std::string& name);

ExperimentConfig parse_experiment(const std::string& text, const std::string& name);

/// Reads and parses one file; the experiment name is the file stem. Throws
/// std::runtime_error when the file cannot be read.
ExperimentConfig load_experiment(const std::string& path);

/// Final path component without its extension ("configs/nag-sc.toml" ->
/// "nag-sc").
std::string file_stem(const std::string& path);

/// Instantiates the configured objective with its start point.
ProblemInstance build_problem(const ObjectiveConfig& config);

/// Resolves the step size ("theorem" through the certified-step table, using
/// the objective's constants) into a runnable scheme.
SchemeSpec resolve_scheme(const SchemeConfig& config, const Objective& obj);

/// Integrator step for flow checks: the configured h, or half the
/// integrator's cap min(1/(10 L), sqrt(s)/10) when h = 0.
double flow_integrator_step(const ChecksConfig& config, double lipschitz, double s);

}  // namespace accelode
