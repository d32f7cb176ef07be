#pragma once

#include <string>
#include <vector>

#include "accelode/integrators.hpp"
#include "accelode/lyapunov.hpp"
#include "accelode/objectives.hpp"
#include "accelode/phase.hpp"

namespace accelode {

/// One integration sample X(t), V(t) with the measurements the continuous
/// rate bounds are stated in.
struct FlowSample {
  double t = 0.0;
  PhaseState state;
  double f_gap = 0.0;
  double grad_norm_sq = 0.0;
};

/// A continuous trajectory produced by fixed-step 4th-order integration of a
/// family's vector field. `start_time` is where integration actually began:
/// the family's time origin, except LOW_C which starts at t = 1e-3 to stay
/// clear of the 3/t singularity (recorded here so consumers see the offset).
struct FlowTrace {
  OdeFamily family = OdeFamily::GRAD_FLOW;
  double s = 0.0;
  double integrator_step = 0.0;
  double start_time = 0.0;
  std::vector<FlowSample> samples;
  bool diverged = false;  // integration hit a non-finite state and stopped

  /// Linearly interpolated position X(t). Throws std::invalid_argument when
  /// t lies outside the sampled range.
  Vector position_at(double t) const;
};

/// Integrates the family's phase-space field from the canonical initial
/// condition of `problem` up to `horizon` with fixed step h, sampling every
/// step. Requires h <= min(1/(10 L), sqrt(s)/10) so the integrator error
/// stays far below the quantities being certified, and horizon past the
/// start time. A non-finite state truncates the trace and sets `diverged`.
FlowTrace integrate(OdeFamily family, const ProblemInstance& problem, double s, double horizon,
                    double h);

/// Per-iterate deviation between a discrete trace and the continuous flow at
/// the trace's own time stamps.
struct GapSample {
  long k = 0;
  double gap = 0.0;  // ||x_k - X(t_k)||
};

/// Measures ||x_k - X(t_k)|| for every recorded iterate. Throws on a horizon
/// mismatch (flow too short for a completed trace); a diverged trace is
/// compared up to where either side ends.
std::vector<GapSample> discretization_gap(const FlowTrace& flow, const Trace& trace);

/// Outcome of checking one continuous functional along a flow.
struct FlowMonotoneReport {
  std::string functional_id;
  bool applicable = false;
  std::string reason;
  bool pass = false;
  double max_increase = 0.0;     // largest rise between consecutive samples
  long first_violation_index = -1;
  double first_violation_t = 0.0;  // meaningful when an index is set
  long pairs_checked = 0;
};

/// Checks that a continuous functional never increases between consecutive
/// flow samples beyond an absolute slack (default 1e-7, absorbing integrator
/// and rounding error). Inapplicable when the functional belongs to another
/// family or needs strong convexity the objective lacks; throws when handed
/// a discrete functional.
FlowMonotoneReport check_flow_monotone(const LyapunovSpec& spec, const Objective& obj,
                                       const FlowTrace& flow, double slack = 1e-7);

}  // namespace accelode
