#pragma once

#include <string>
#include <vector>

#include "accelode/objectives.hpp"

namespace accelode {

/// Position/velocity pair. First-order dynamics (plain gradient flow) ride in
/// the same two-slot state with the velocity held at zero so every downstream
/// consumer sees one trace schema.
struct PhaseState {
  Vector x;
  Vector v;

  bool finite() const { return x.allFinite() && v.allFinite(); }
};

/// The continuous models, ordered from gradient flow through the
/// low-resolution momentum limits to the high-resolution families that keep
/// the O(sqrt(s)) Hessian-velocity correction:
///   GRAD_FLOW  dX = -grad f(X)
///   LOW_C      dV = -(3/t) V - grad f(X)
///   LOW_SC     dV = -2 sqrt(mu) V - grad f(X)
///   HB_HR      dV = -2 sqrt(mu) V - (1 + sqrt(mu s)) grad f(X)
///   SC_HR      dV = -2 sqrt(mu) V - sqrt(s) H(X) V - (1 + sqrt(mu s)) grad f(X)
///   C_HR       dV = -(3/t) V - sqrt(s) H(X) V - (1 + 3 sqrt(s)/(2t)) grad f(X)
///   C_HR_MOD   dV = -(3/t) V - sqrt(s) H(X) V - (1 + 3 sqrt(s)/t) grad f(X)
/// (dX = V throughout; H is the Hessian). LOW_SC, HB_HR, SC_HR model the
/// strongly convex methods and require mu > 0; the time-varying families are
/// defined for t at or past their start time only.
enum class OdeFamily { GRAD_FLOW, LOW_C, LOW_SC, HB_HR, SC_HR, C_HR, C_HR_MOD };

const std::vector<OdeFamily>& all_families();
std::string family_name(OdeFamily family);
OdeFamily family_from_name(const std::string& name);

bool requires_strong_convexity(OdeFamily family);
bool time_varying(OdeFamily family);         // damping coefficient depends on t (or k)
bool has_gradient_correction(OdeFamily family);  // field contains sqrt(s) H(X) V

/// Earliest time the field is defined: 1.5 sqrt(s) for the time-varying
/// high-resolution families (whose damping 3/t blows up at 0), 0 otherwise.
double time_origin(OdeFamily family, double s);

/// Right-hand side (dX, dV) of the family's phase-space system at time t.
PhaseState vector_field(OdeFamily family, const Objective& obj, double s, double t,
                        const PhaseState& state);

/// Start state and start time:
///   SC_HR, HB_HR: v0 = -2 sqrt(s) grad f(x0) / (1 + sqrt(mu s)), t0 = 0
///   C_HR, C_HR_MOD: v0 = -sqrt(s) grad f(x0), t0 = 1.5 sqrt(s)
///   LOW_SC, LOW_C, GRAD_FLOW: v0 = 0, t0 = 0.
struct InitialCondition {
  PhaseState state;
  double t0;
};
InitialCondition initial_state(OdeFamily family, const Objective& obj, const Vector& x0,
                               double s);

}  // namespace accelode
