#pragma once

#include <string>
#include <vector>

#include "accelode/config.hpp"
#include "accelode/integrators.hpp"
#include "accelode/reference_flow.hpp"

namespace accelode {

/// Command-line entry point behind the accel-ode tool. Exit codes: 0 ok,
/// 1 usage or config error, 2 certification failure (verify), 3 numerical
/// divergence, 4 implicit-solver failure.
int run_cli(int argc, char** argv);

/// One certified check (rate bound or energy decrease) evaluated on a run.
struct CheckRecord {
  std::string scheme;    // scheme the trace/flow ran, with its step size
  std::string instance;  // objective label and constants
  std::string check_id;  // bound or functional id ("termination" for the run itself)
  std::string kind;      // bound | energy | flow-bound | flow-energy | run
  bool applicable = false;
  std::string reason;  // set when inapplicable
  bool pass = false;
  long first_violation_k = -1;  // iterate (discrete) or sample (flow) index
  double ratio = 0.0;  // worst quantity/envelope (bounds) or excess (energies)
};

/// Every certified check for one discrete trace: the run completing, every
/// cataloged rate bound stated for its scheme pair, and every proved energy
/// functional. Expected-failure diagnostics are reported by `run`, never
/// certified here.
std::vector<CheckRecord> certify_trace(const Trace& trace);

/// Certified continuous checks along one integrated flow: the integration
/// staying finite, the flow rate bounds, and the proved flow energies.
std::vector<CheckRecord> certify_flow(const FlowTrace& flow, const ProblemInstance& problem);

/// Outcome of one verification suite (or of verifying a single config).
struct SuiteResult {
  std::string suite;
  std::vector<CheckRecord> records;
  long runs = 0;        // traces and flows executed
  long applicable = 0;  // records that were applicable
  bool pass = true;     // no applicable record failed
};

/// strongly-convex, convex, low-resolution, gradient-descent, continuous.
const std::vector<std::string>& suite_names();

/// Runs every scheme/instance of the named suite at the certified step sizes
/// (plus half and tenth where a range-form rate exists) and checks all
/// applicable bounds and proved energies. Throws std::invalid_argument for an
/// unknown suite name.
SuiteResult run_suite(const std::string& name);

/// Folds per-check records into a SuiteResult (applicable/pass tallies).
SuiteResult fold_records(const std::string& suite, std::vector<CheckRecord> records, long runs);

/// 0 when every applicable check passed, 2 otherwise.
int verify_exit_code(const SuiteResult& result);

}  // namespace accelode
