#include "accelode/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace accelode {
namespace {

[[noreturn]] void fail_at(int line_no, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + what);
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Drops a # comment, honoring # characters inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_string && ch == '\\') {
      ++i;  // skip the escaped character
    } else if (ch == '"') {
      in_string = !in_string;
    } else if (!in_string && ch == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_identifier(const std::string& text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch == '-';
  });
}

ConfigValue parse_string_value(const std::string& raw, int line_no) {
  ConfigValue value;
  value.kind = ConfigValue::Kind::STRING;
  std::string out;
  std::size_t i = 1;
  for (; i < raw.size(); ++i) {
    const char ch = raw[i];
    if (ch == '"') break;
    if (ch == '\\') {
      if (i + 1 >= raw.size()) fail_at(line_no, "dangling escape in string");
      const char esc = raw[++i];
      switch (esc) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: fail_at(line_no, std::string("unsupported escape \\") + esc);
      }
    } else {
      out += ch;
    }
  }
  if (i >= raw.size()) fail_at(line_no, "unterminated string");
  if (i + 1 != raw.size()) fail_at(line_no, "trailing characters after string");
  value.text = out;
  return value;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
  if (raw.empty()) fail_at(line_no, "missing value");
  if (raw.front() == '"') return parse_string_value(raw, line_no);
  ConfigValue value;
  if (raw == "true" || raw == "false") {
    value.kind = ConfigValue::Kind::BOOLEAN;
    value.truth = raw == "true";
    return value;
  }
  const bool numeric_chars = std::all_of(raw.begin(), raw.end(), [](unsigned char ch) {
    return std::isdigit(ch) || ch == '+' || ch == '-' || ch == '.' || ch == 'e' || ch == 'E';
  });
  if (!numeric_chars) fail_at(line_no, "unrecognized value '" + raw + "'");
  std::size_t consumed = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(raw, &consumed);
  } catch (const std::exception&) {
    fail_at(line_no, "malformed number '" + raw + "'");
  }
  if (consumed != raw.size()) fail_at(line_no, "malformed number '" + raw + "'");
  if (!std::isfinite(parsed)) fail_at(line_no, "number '" + raw + "' is not finite");
  value.kind = ConfigValue::Kind::NUMBER;
  value.number = parsed;
  return value;
}

std::string kind_label(ConfigValue::Kind kind) {
  switch (kind) {
    case ConfigValue::Kind::STRING: return "string";
    case ConfigValue::Kind::NUMBER: return "number";
    case ConfigValue::Kind::BOOLEAN: return "boolean";
  }
  return "value";
}

// Accessors used by the schema pass; `where` is "section.key" for messages.
[[noreturn]] void fail_key(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config key '" + where + "': " + what);
}

double as_number(const ConfigValue& value, const std::string& where) {
  if (value.kind != ConfigValue::Kind::NUMBER)
    fail_key(where, "expected a number, got a " + kind_label(value.kind));
  return value.number;
}

bool as_boolean(const ConfigValue& value, const std::string& where) {
  if (value.kind != ConfigValue::Kind::BOOLEAN)
    fail_key(where, "expected true or false, got a " + kind_label(value.kind));
  return value.truth;
}

std::string as_string(const ConfigValue& value, const std::string& where) {
  if (value.kind != ConfigValue::Kind::STRING)
    fail_key(where, "expected a quoted string, got a " + kind_label(value.kind));
  return value.text;
}

long as_integer(const ConfigValue& value, const std::string& where, long lo, long hi) {
  const double number = as_number(value, where);
  if (number != std::floor(number)) fail_key(where, "expected an integer");
  if (number < static_cast<double>(lo) || number > static_cast<double>(hi))
    fail_key(where, "value " + std::to_string(number) + " is out of range");
  return static_cast<long>(number);
}

double as_positive(const ConfigValue& value, const std::string& where) {
  const double number = as_number(value, where);
  if (!(number > 0.0)) fail_key(where, "expected a positive number");
  return number;
}

using Section = std::map<std::string, ConfigValue>;

void require_known_keys(const Section& section, const std::string& section_name,
                        const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    if (!allowed.count(key))
      throw std::invalid_argument("config section [" + section_name + "] has no key '" + key +
                                  "' (for this objective kind)");
  }
}

ObjectiveConfig read_objective(const Section& section) {
  ObjectiveConfig config;
  if (auto it = section.find("kind"); it != section.end())
    config.kind = as_string(it->second, "objective.kind");
  std::set<std::string> allowed = {"kind", "dim", "seed", "x0_seed", "start"};
  if (config.kind == "quadratic") {
    allowed.insert({"mu", "L"});
  } else if (config.kind == "logistic") {
    allowed.insert({"samples", "reg"});
    config.dim = 5;
    config.seed = 3;
  } else if (config.kind == "log-sum-exp") {
    allowed.insert({"sharpness"});
    config.dim = 5;
    config.seed = 1;
  } else {
    fail_key("objective.kind", "unknown objective kind '" + config.kind + "'");
  }
  require_known_keys(section, "objective", allowed);
  for (const auto& [key, value] : section) {
    const std::string where = "objective." + key;
    if (key == "kind") continue;
    if (key == "dim") config.dim = static_cast<int>(as_integer(value, where, 1, 10000));
    else if (key == "mu") config.mu = as_number(value, where);
    else if (key == "L") config.lipschitz = as_positive(value, where);
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(as_integer(value, where, 0, 1L << 60));
    else if (key == "x0_seed") config.x0_seed = static_cast<std::uint64_t>(as_integer(value, where, 0, 1L << 60));
    else if (key == "samples") config.samples = static_cast<int>(as_integer(value, where, 1, 1000000));
    else if (key == "reg") config.reg = as_positive(value, where);
    else if (key == "sharpness") config.sharpness = as_positive(value, where);
    else if (key == "start") config.start = as_string(value, where);
  }
  if (config.kind == "quadratic") {
    if (config.mu < 0.0) fail_key("objective.mu", "must be nonnegative");
    if (config.mu > config.lipschitz) fail_key("objective.mu", "must not exceed L");
  }
  if (config.start != "offset" && config.start != "minimizer")
    fail_key("objective.start", "expected \"offset\" or \"minimizer\"");
  return config;
}

SchemeConfig read_scheme(const Section& section) {
  SchemeConfig config;
  require_known_keys(section, "scheme", {"family", "rule", "step_size"});
  if (auto it = section.find("family"); it != section.end())
    config.family = family_from_name(as_string(it->second, "scheme.family"));
  if (auto it = section.find("rule"); it != section.end())
    config.rule = rule_from_name(as_string(it->second, "scheme.rule"));
  if (auto it = section.find("step_size"); it != section.end()) {
    const ConfigValue& value = it->second;
    if (value.kind == ConfigValue::Kind::STRING) {
      if (value.text != "theorem")
        fail_key("scheme.step_size", "expected a positive number or \"theorem\"");
      config.theorem_step = true;
    } else {
      config.theorem_step = false;
      config.step_size = as_positive(value, "scheme.step_size");
    }
  }
  if (!admissible(config.family, config.rule))
    throw std::invalid_argument("config: scheme " + family_name(config.family) + " (" +
                                rule_name(config.rule) + ") is not defined");
  if (config.theorem_step && !has_theorem_step_size(config.family, config.rule))
    throw std::invalid_argument("config: scheme " + family_name(config.family) + " (" +
                                rule_name(config.rule) +
                                ") has no certified step size; give step_size a number");
  return config;
}

RunConfig read_run(const Section& section) {
  RunConfig config;
  require_known_keys(section, "run", {"iterations", "record_every"});
  if (auto it = section.find("iterations"); it != section.end())
    config.iterations = as_integer(it->second, "run.iterations", 0, 100000000);
  if (auto it = section.find("record_every"); it != section.end())
    config.record_every = as_integer(it->second, "run.record_every", 1, 100000000);
  return config;
}

ChecksConfig read_checks(const Section& section) {
  ChecksConfig config;
  require_known_keys(section, "checks",
                     {"lyapunov", "bounds", "flow_compare", "horizon", "h"});
  if (auto it = section.find("lyapunov"); it != section.end())
    config.lyapunov = as_boolean(it->second, "checks.lyapunov");
  if (auto it = section.find("bounds"); it != section.end())
    config.bounds = as_boolean(it->second, "checks.bounds");
  if (auto it = section.find("flow_compare"); it != section.end())
    config.flow_compare = as_boolean(it->second, "checks.flow_compare");
  if (auto it = section.find("horizon"); it != section.end())
    config.horizon = as_positive(it->second, "checks.horizon");
  if (auto it = section.find("h"); it != section.end()) {
    config.h = as_number(it->second, "checks.h");
    if (config.h < 0.0) fail_key("checks.h", "must be nonnegative (0 = automatic)");
  }
  return config;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable table;
  Section* current = nullptr;
  std::string current_name;
  std::istringstream lines(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(lines, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(line_no, "malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_identifier(name)) fail_at(line_no, "malformed section name");
      if (table.count(name)) fail_at(line_no, "duplicate section [" + name + "]");
      current = &table[name];
      current_name = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_at(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw_value = trim(line.substr(eq + 1));
    if (!valid_identifier(key)) fail_at(line_no, "malformed key '" + key + "'");
    if (current == nullptr) fail_at(line_no, "key '" + key + "' appears outside any [section]");
    if (current->count(key))
      fail_at(line_no, "duplicate key '" + key + "' in section [" + current_name + "]");
    (*current)[key] = parse_value(raw_value, line_no);
  }
  return table;
}

ExperimentConfig config_from_table(const ConfigTable& table, const std::string& name) {
  ExperimentConfig config;
  config.name = name;
  for (const auto& [section, keys] : table) {
    if (section != "objective" && section != "scheme" && section != "run" &&
        section != "checks")
      throw std::invalid_argument("config: unknown section [" + section + "]");
  }
  if (auto it = table.find("objective"); it != table.end())
    config.objective = read_objective(it->second);
  if (auto it = table.find("scheme"); it != table.end())
    config.scheme = read_scheme(it->second);
  if (auto it = table.find("run"); it != table.end()) config.run = read_run(it->second);
  if (auto it = table.find("checks"); it != table.end())
    config.checks = read_checks(it->second);
  return config;
}

ExperimentConfig parse_experiment(const std::string& text, const std::string& name) {
  return config_from_table(parse_config_text(text), name);
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return parse_experiment(contents.str(), file_stem(path));
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

ProblemInstance build_problem(const ObjectiveConfig& config) {
  Objective obj;
  if (config.kind == "quadratic") {
    obj = make_quadratic(config.dim, config.mu, config.lipschitz, config.seed);
  } else if (config.kind == "logistic") {
    obj = make_logistic(config.samples, config.dim, config.reg, config.seed);
  } else if (config.kind == "log-sum-exp") {
    obj = make_log_sum_exp(config.dim, config.sharpness, config.seed);
  } else {
    throw std::invalid_argument("unknown objective kind '" + config.kind + "'");
  }
  ProblemInstance problem = make_instance(std::move(obj), config.kind, config.x0_seed);
  if (config.start == "minimizer") problem.x0 = *problem.objective.minimizer;
  return problem;
}

SchemeSpec resolve_scheme(const SchemeConfig& config, const Objective& obj) {
  SchemeSpec spec{config.family, config.rule, config.step_size};
  if (config.theorem_step)
    spec.step_size = theorem_step_size(config.family, config.rule, obj.mu, obj.lipschitz);
  require_admissible(spec);
  return spec;
}

double flow_integrator_step(const ChecksConfig& config, double lipschitz, double s) {
  if (config.h > 0.0) return config.h;
  const double cap = std::min(0.1 / lipschitz, std::sqrt(s) / 10.0);
  return 0.5 * cap;
}

}  // namespace accelode
