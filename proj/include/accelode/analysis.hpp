#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "accelode/integrators.hpp"
#include "accelode/objectives.hpp"
#include "accelode/phase.hpp"
#include "accelode/reference_flow.hpp"
#include "accelode/schemes.hpp"

namespace accelode {

/// What a rate bound constrains: the objective gap, the squared distance to
/// the minimizer, or the running minimum of the squared gradient norm.
enum class BoundQuantity { F_GAP, DIST_SQ, MIN_GRAD_SQ };
std::string bound_quantity_name(BoundQuantity quantity);

/// Arguments every envelope is evaluated from: the iteration index k (or time
/// t for continuous bounds), the problem constants, and the step size.
struct BoundInputs {
  double kt = 0.0;
  double mu = 0.0;
  double lipschitz = 0.0;
  double d0_sq = 0.0;   // ||x0 - x*||^2
  double f0_gap = 0.0;  // f(x0) - f*
  double s = 0.0;
};

///// One closed-form convergence guarantee: which schemes (or which flow) it is
/// stated for, under which step-size condition, and the envelope the measured
/// quantity must stay below. `fixed_step` marks rates stated at a single step
/// size; `max_step` marks rates stated for every 0 < s <= cap; neither set
/// means the rate holds for any s > 0.
struct RateBound {
  std::string id;
  std::vector<std::pair<OdeFamily, SchemeRule>> applies_to;  // empty when continuous
  bool continuous = false;
  OdeFamily flow_family = OdeFamily::GRAD_FLOW;
  bool needs_strong_convexity = false;
  BoundQuantity quantity = BoundQuantity::F_GAP;
  std::function<double(double mu, double lipschitz)> fixed_step;
  std::function<double(double mu, double lipschitz)> max_step;
  long min_index = 0;  // first iterate the envelope is stated for
  long min_start = 0;  // first iterate entering a MIN_GRAD_SQ running minimum
  std::function<double(const BoundInputs&)> envelope;
  std::string step_condition;  // human-readable form of the step-size condition
};

/// Every displayed convergence rate, discrete and continuous.
const std::vector<RateBound>& bound_catalog();
const RateBound& bound_by_id(const std::string& id);
std::vector<const RateBound*> bounds_for(OdeFamily family, SchemeRule rule);
std::vector<const RateBound*> flow_bounds_for(OdeFamily family);

/// Outcome of holding a trace (or flow) against one bound.
struct BoundReport {
  std::string bound_id;
  bool applicable = false;
  std::string reason;  // set when inapplicable
  bool pass = false;
  double max_ratio = 0.0;        // worst quantity / envelope over the checked points
  long first_violation_k = -1;   // iterate index (discrete) or sample index (flow)
  double first_violation_t = 0.0;
  long points_checked = 0;
};

///// Discrete check: quantity <= envelope * (1 + 1e-9) at every recorded index
/// at or past min_index. MIN_GRAD_SQ compares the running minimum over the
/// recorded iterates from min_start on, so certification traces should record
/// every step.
BoundReport check_bound(const RateBound& bound, const Trace& trace,
                        const ProblemInstance& problem);

/// Continuous check along a flow; `extra_slack` is an absolute allowance for
/// integrator error on top of the relative tolerance.
BoundReport check_bound(const RateBound& bound, const FlowTrace& flow,
                        const ProblemInstance& problem, double extra_slack = 1e-6);

/// Empirical per-step contraction of f-gap, fitted by least squares on
/// log f_gap over the trailing window of a completed trace. The window drops
/// iterates once f_gap underflows 1e-280; fewer than two usable points make
/// the fit degenerate.
struct RateFit {
  bool degenerate = true;
  double rho_hat = 1.0;  // exp(fitted slope)
  long k_lo = 0;
  long k_hi = 0;
  double residual = 0.0;  // root-mean-square regression residual
};
RateFit fit_rate(const Trace& trace, double tail_fraction = 0.5);

/// The scheme restricted to one Hessian eigenmode: the exact one-step linear
/// map on (x - x*, v) deviations — 1x1 for first-order gradient descent, 2x2
/// otherwise. Schemes with k-dependent coefficients are evaluated in their
/// k -> infinity limit (damping -> 0, gradient weight -> 1).
Matrix mode_matrix(const SchemeSpec& spec, double eigenvalue, double mu, double s);

struct SpectralReport {
  double radius = 0.0;
  bool asymptotic = false;     // k-dependent coefficients taken in the limit
  bool real_dominant = false;  // the radius is attained by a real eigenvalue
  bool warned = false;         // eigenvalue outside [mu, L]
};

/// Spectral radius of mode_matrix. An eigenvalue outside [mu, L] is still
/// computed but flagged. Throws on s <= 0 or mu < 0.
SpectralReport spectral_radius(const SchemeSpec& spec, double eigenvalue, double mu, double s);

}  // namespace accelode
