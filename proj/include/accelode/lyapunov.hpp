#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "accelode/integrators.hpp"
#include "accelode/objectives.hpp"
#include "accelode/phase.hpp"
#include "accelode/schemes.hpp"

namespace accelode {

/// How confident the catalog is in a functional's decrease property.
///  - PROVED: a closed-form per-step inequality is certified for it.
///  - EXPLORATORY: a natural variant checked numerically, no written proof.
///  - EXPECTED_FAILURE: the known proof technique breaks down for this
///    scheme; the functional is kept as a diagnostic and violations of
///    monotonicity are recorded, not treated as bugs.
enum class FunctionalStatus { PROVED, EXPLORATORY, EXPECTED_FAILURE };

std::string functional_status_name(FunctionalStatus status);

/// The inequality a functional is checked against between steps k and k+1.
///  - DIFFERENCE_NEXT: E(k+1) - E(k) <= -c * E(k+1)
///  - DIFFERENCE_CURR: E(k+1) - E(k) <= -c * E(k)
///  - MONOTONE:        E(k+1) - E(k) <= -surplus(k)   (surplus 0 when unset)
enum class ContractionMode { DIFFERENCE_NEXT, DIFFERENCE_CURR, MONOTONE };

std::string contraction_mode_name(ContractionMode mode);

/// One Lyapunov (energy) functional, either discrete (evaluated along a
/// scheme trace) or continuous (evaluated on a flow state at time t).
///
/// A discrete functional may read the state one index ahead of k (the
/// x_{k+1} forms); `window` declares how many records past k the formula
/// needs, and evaluation fails loudly when the trace was thinned below it.
struct LyapunovSpec {
  std::string id;
  // Scheme pairs the decrease claim is stated for; empty for continuous.
  std::vector<std::pair<OdeFamily, SchemeRule>> applies_to;
  bool continuous = false;
  OdeFamily flow_family = OdeFamily::GRAD_FLOW;  // meaningful when continuous
  bool needs_strong_convexity = false;
  // Largest certified step size as a function of (mu, L); null means any s.
  std::function<double(double, double)> max_step;
  std::string step_condition;  // human-readable form of max_step
  ContractionMode mode = ContractionMode::MONOTONE;
  // Contraction rate c(mu, L, s); null for MONOTONE functionals.
  std::function<double(double, double, double)> rate;
  // Extra required decrease for MONOTONE functionals (returned positive);
  // may read the record at k+1.
  std::function<double(const Objective&, double, const Trace&, long)> surplus;
  // Discrete evaluation E(k) along a trace.
  std::function<double(const Objective&, double, const Trace&, long)> evaluate;
  // Continuous evaluation E(t) on a flow state.
  std::function<double(const Objective&, double, const PhaseState&)> evaluate_flow;
  int window = 0;  // records past k the formula reads (1 for x_{k+1} forms)
  FunctionalStatus status = FunctionalStatus::PROVED;
};

/// Every functional in the catalog: certified discrete energies for each
/// scheme, exploratory shifted variants, failure diagnostics for the schemes
/// without a decrease guarantee, and the continuous flow energies.
const std::vector<LyapunovSpec>& lyapunov_catalog();

const LyapunovSpec& lyapunov_by_id(const std::string& id);

/// Discrete functionals whose applicability includes (family, rule).
std::vector<const LyapunovSpec*> functionals_for(OdeFamily family, SchemeRule rule);

/// E(k) along a discrete trace. Throws std::invalid_argument when the trace
/// does not contain index k (or k + window), e.g. after thinning, or when
/// called on a continuous functional.
double eval_lyapunov(const LyapunovSpec& spec, const Objective& obj, double s,
                     const Trace& trace, long k);

/// Outcome of checking a functional's declared inequality along a trace.
struct ContractionReport {
  std::string functional_id;
  bool applicable = false;
  std::string reason;  // why the check was skipped, when inapplicable
  bool pass = false;
  double max_violation = 0.0;   // largest positive excess beyond slack
  long first_violation_k = -1;  // -1 when no violation
  long pairs_checked = 0;
};

/// Checks the declared per-step inequality at every consecutive index pair
/// of a dense trace, with slack 1e-9 * (1 + |E(k)|) absorbing rounding.
/// Reports inapplicable (not a violation) when the scheme pair does not
/// match, the objective lacks required strong convexity, or the trace step
/// size exceeds the certified range. Throws std::invalid_argument on a
/// thinned or too-short trace and on continuous functionals.
ContractionReport check_contraction(const LyapunovSpec& spec, const Objective& obj,
                                    const Trace& trace);

}  // namespace accelode
