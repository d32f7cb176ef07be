#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "accelode/config.hpp"
#include "accelode/phase.hpp"
#include "accelode/schemes.hpp"

using namespace accelode;

TEST_CASE("parser reads sections, values, and comments") {
  const std::string text =
      "# experiment file\n"
      "[objective]\n"
      "kind = \"quadratic\"   # a trailing comment\n"
      "dim = 4\n"
      "mu = 0.25\n"
      "L = 1.0\n"
      "\n"
      "[scheme]\n"
      "family = \"SC_HR\"\n"
      "rule = \"SYMPLECTIC\"\n"
      "step_size = 4e-2\n"
      "[checks]\n"
      "bounds = true\n"
      "note = \"has # inside \\\"quotes\\\"\"\n";
  ConfigTable table = parse_config_text(text);
  CHECK(table.size() == 3);
  CHECK(table.at("objective").at("kind").text == "quadratic");
  CHECK(table.at("objective").at("dim").number == 4.0);
  CHECK(table.at("objective").at("mu").number == 0.25);
  CHECK(table.at("scheme").at("step_size").number == 0.04);
  CHECK(table.at("checks").at("bounds").truth == true);
  CHECK(table.at("checks").at("note").text == "has # inside \"quotes\"");
}

TEST_CASE("parser rejects malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("x = 1\n"),
                       doctest::Contains("outside any [section]"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\niterations 5\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run\niterations = 5\n"),
                       doctest::Contains("malformed section"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\n[run]\n"),
                       doctest::Contains("duplicate section"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\na = 1\na = 2\n"),
                       doctest::Contains("duplicate key"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\na = \"oops\n"),
                       doctest::Contains("unterminated"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\na = 1.2.3\n"),
                       doctest::Contains("malformed number"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\na = yes\n"),
                       doctest::Contains("unrecognized value"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\na = \"x\" junk\n"),
                       doctest::Contains("trailing characters"), std::invalid_argument);
}

TEST_CASE("defaults reproduce the canonical experiment") {
  ExperimentConfig config = parse_experiment("", "empty");
  CHECK(config.name == "empty");
  CHECK(config.objective.kind == "quadratic");
  CHECK(config.objective.dim == 10);
  CHECK(config.objective.mu == 0.01);
  CHECK(config.objective.lipschitz == 1.0);
  CHECK(config.scheme.family == OdeFamily::SC_HR);
  CHECK(config.scheme.rule == SchemeRule::SYMPLECTIC);
  CHECK(config.scheme.theorem_step);
  CHECK(config.run.iterations == 500);
  CHECK(config.run.record_every == 1);
  CHECK_FALSE(config.checks.lyapunov);
  CHECK_FALSE(config.checks.bounds);
  CHECK_FALSE(config.checks.flow_compare);

  // The default problem is byte-for-byte the canonical quadratic instance.
  ProblemInstance built = build_problem(config.objective);
  ProblemInstance canonical = canonical_quadratic(0.01, 1.0);
  CHECK(built.label == canonical.label);
  CHECK((built.x0 - canonical.x0).norm() == 0.0);
  CHECK((*built.objective.minimizer - *canonical.objective.minimizer).norm() == 0.0);
  CHECK(built.d0_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schema validation names the offending key") {
  CHECK_THROWS_WITH_AS(parse_experiment("[grid]\nn = 3\n", "t"),
                       doctest::Contains("unknown section [grid]"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[run]\nsteps = 3\n", "t"),
                       doctest::Contains("no key 'steps'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[objective]\nkind = \"logistic\"\nmu = 0.1\n", "t"),
                       doctest::Contains("no key 'mu'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[objective]\nkind = \"cubic\"\n", "t"),
                       doctest::Contains("unknown objective kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[objective]\ndim = 0\n", "t"),
                       doctest::Contains("out of range"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[objective]\nmu = 2.0\n", "t"),
                       doctest::Contains("must not exceed L"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[objective]\ndim = 2.5\n", "t"),
                       doctest::Contains("expected an integer"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[run]\niterations = -1\n", "t"),
                       doctest::Contains("out of range"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[run]\nrecord_every = 0\n", "t"),
                       doctest::Contains("out of range"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[checks]\nhorizon = 0\n", "t"),
                       doctest::Contains("positive"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[checks]\nlyapunov = 1\n", "t"),
                       doctest::Contains("expected true or false"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[scheme]\nstep_size = \"auto\"\n", "t"),
                       doctest::Contains("\"theorem\""), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[scheme]\nstep_size = -0.1\n", "t"),
                       doctest::Contains("positive"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_experiment("[scheme]\nfamily = \"GRAD_FLOW\"\nrule = \"SYMPLECTIC\"\n", "t"),
      doctest::Contains("not defined"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_experiment("[scheme]\nfamily = \"NAG\"\n", "t"),
                       doctest::Contains("unknown ODE family"), std::invalid_argument);
  // A "theorem" step must exist for the pair: C_HR has no certified rate.
  CHECK_THROWS_WITH_AS(parse_experiment("[scheme]\nfamily = \"C_HR\"\n", "t"),
                       doctest::Contains("no certified step size"), std::invalid_argument);
  CHECK_NOTHROW(parse_experiment("[scheme]\nfamily = \"C_HR\"\nstep_size = 0.1\n", "t"));
}

TEST_CASE("theorem step sizes resolve from the objective constants") {
  ProblemInstance problem = canonical_quadratic(0.01, 1.0);
  auto resolved = [&](const std::string& family, const std::string& rule) {
    SchemeConfig config;
    config.family = family_from_name(family);
    config.rule = rule_from_name(rule);
    config.theorem_step = true;
    return resolve_scheme(config, problem.objective).step_size;
  };
  CHECK(resolved("SC_HR", "SYMPLECTIC") == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(resolved("SC_HR", "EXPLICIT") == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(resolved("SC_HR", "IMPLICIT") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(resolved("HB_HR", "SYMPLECTIC") == doctest::Approx(0.01 / 16.0).epsilon(1e-15));
  CHECK(resolved("C_HR_MOD", "SYMPLECTIC") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(resolved("GRAD_FLOW", "EXPLICIT") == doctest::Approx(1.0).epsilon(1e-15));

  SchemeConfig numeric;
  numeric.family = OdeFamily::HB_HR;
  numeric.rule = SchemeRule::EXPLICIT;
  numeric.theorem_step = false;
  numeric.step_size = 0.125;
  CHECK(resolve_scheme(numeric, problem.objective).step_size == 0.125);
}

TEST_CASE("build_problem covers every kind and the minimizer start") {
  ExperimentConfig logistic = parse_experiment("[objective]\nkind = \"logistic\"\n", "t");
  ProblemInstance built = build_problem(logistic.objective);
  ProblemInstance canonical = canonical_logistic();
  CHECK(built.label == "logistic");
  CHECK((built.x0 - canonical.x0).norm() == 0.0);
  CHECK(built.objective.mu == canonical.objective.mu);
  CHECK(built.objective.lipschitz == canonical.objective.lipschitz);

  ExperimentConfig lse = parse_experiment("[objective]\nkind = \"log-sum-exp\"\n", "t");
  ProblemInstance built_lse = build_problem(lse.objective);
  ProblemInstance canonical_lse = canonical_log_sum_exp();
  CHECK(built_lse.objective.mu == 0.0);
  CHECK((built_lse.x0 - canonical_lse.x0).norm() == 0.0);

  ExperimentConfig at_min = parse_experiment(
      "[objective]\nkind = \"quadratic\"\nstart = \"minimizer\"\n", "t");
  CHECK(build_problem(at_min.objective).d0_sq() == 0.0);

  // dim = 1 quadratics drop the linear term: the minimizer is the origin.
  ExperimentConfig scalar = parse_experiment(
      "[objective]\nkind = \"quadratic\"\ndim = 1\nmu = 1.0\nL = 1.0\n", "t");
  ProblemInstance built_scalar = build_problem(scalar.objective);
  CHECK(built_scalar.objective.minimizer->norm() == 0.0);
  CHECK(built_scalar.d0_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("load_experiment reads a file and names it by stem") {
  const std::string path = "config_test_roundtrip.toml";
  {
    std::ofstream out(path);
    out << "[scheme]\nfamily = \"HB_HR\"\nrule = \"IMPLICIT\"\nstep_size = \"theorem\"\n"
        << "[run]\niterations = 40\nrecord_every = 4\n"
        << "[checks]\nflow_compare = true\nhorizon = 2.5\nh = 0.01\n";
  }
  ExperimentConfig config = load_experiment(path);
  std::remove(path.c_str());
  CHECK(config.name == "config_test_roundtrip");
  CHECK(config.scheme.family == OdeFamily::HB_HR);
  CHECK(config.scheme.rule == SchemeRule::IMPLICIT);
  CHECK(config.scheme.theorem_step);
  CHECK(config.run.iterations == 40);
  CHECK(config.run.record_every == 4);
  CHECK(config.checks.flow_compare);
  CHECK(config.checks.horizon == 2.5);
  CHECK(config.checks.h == 0.01);
  CHECK(flow_integrator_step(config.checks, 1.0, 1.0) == 0.01);

  ChecksConfig automatic;  // h = 0 -> half the integrator cap
  CHECK(flow_integrator_step(automatic, 2.0, 1.0) == doctest::Approx(0.025));
  CHECK(flow_integrator_step(automatic, 0.5, 0.01) == doctest::Approx(0.005));

  CHECK_THROWS_AS(load_experiment("no_such_file.toml"), std::runtime_error);
  CHECK(file_stem("configs/nag-sc.toml") == "nag-sc");
  CHECK(file_stem("plain") == "plain");
  CHECK(file_stem("a/b.c.d") == "b.c");
}
