#pragma once

#include <string>
#include <vector>

#include "accelode/phase.hpp"

namespace accelode {

/// Discretization rules for the phase-space systems.
///   SYMPLECTIC: x advances with the current velocity, v with the new point.
///   EXPLICIT:   both slots advance from current values (the gradient
///               difference still spans x_k -> x_{k+1}, which is already
///               computable when v is updated).
///   IMPLICIT:   both slots advance from next values; each step solves a
///               nonlinear system.
///   CLASSICAL:  the textbook method the family models (gradient descent,
///               NAG-SC, heavy-ball, NAG-C), written in phase space.
enum class SchemeRule { SYMPLECTIC, EXPLICIT, IMPLICIT, CLASSICAL };

const std::vector<SchemeRule>& all_rules();
std::string rule_name(SchemeRule rule);
SchemeRule rule_from_name(const std::string& name);

/// One discrete update map: family, rule, and step size s > 0.
struct SchemeSpec {
  OdeFamily family;
  SchemeRule rule;
  double step_size;
};

/// Which (family, rule) pairs exist. All six second-order families admit
/// SYMPLECTIC/EXPLICIT/IMPLICIT; first-order gradient flow admits only
/// EXPLICIT and IMPLICIT. CLASSICAL exists exactly for the families modeling
/// a textbook method: GRAD_FLOW (gradient descent), SC_HR (NAG-SC), HB_HR
/// (heavy-ball), C_HR_MOD (NAG-C, whose classical update coincides with the
/// symplectic one).
bool admissible(OdeFamily family, SchemeRule rule);
void require_admissible(const SchemeSpec& spec);

/// Every velocity update in the second-order schemes shares one template,
///   v_next = v - a * v_slot - sqrt(s) * gd * (grad f(x_next) - grad f(x))
///              - sqrt(s) * c * grad f(x_slot),
/// where the rule decides whether v_slot / x_slot read the current or the
/// next value. The coefficients (a, gd, c) identify the family:
///   LOW_SC    a = 2 sqrt(mu s)        gd = 0  c = 1
///   HB_HR     a = 2 sqrt(mu s)        gd = 0  c = 1 + sqrt(mu s)
///   SC_HR     a = 2 sqrt(mu s)        gd = 1  c = 1 + sqrt(mu s)
///   LOW_C     a = 3/(k+1)             gd = 0  c = 1
///   C_HR      a = 3/(k+1)             gd = 1  c = (2k+5)/(2k+2)
///   C_HR_MOD  a = 3/(k+1)             gd = 1  c = (k+4)/(k+1)
/// and the explicit rule of the time-varying families replaces k+1 by k in
/// the damping (a = 3/k) and shifts c accordingly (LOW_C: 1; C_HR:
/// (2k+3)/(2k); C_HR_MOD: (k+3)/k), so it is defined for k >= 1 only.
struct UpdateCoefficients {
  double a;   // velocity damping
  double gd;  // weight of the gradient difference (the Hessian correction)
  double c;   // weight of the plain gradient
};

UpdateCoefficients update_coefficients(OdeFamily family, SchemeRule rule, double mu,
                                       double s, long k);

/// The step size at which the scheme's convergence rate is stated, resolved
/// symbolically from (mu, L):
///   SC_HR      S: 4/(9L)      E: mu/(100L^2)  I: 1/L  CLASSICAL: 1/L
///   HB_HR      S: mu/(16L^2)  E: mu/(36L^2)   I: 1/L  CLASSICAL: mu/(16L^2)
///   LOW_SC     S: mu/(16L^2)  E: mu/(25L^2)   I: 1/L
///   C_HR_MOD   S/CLASSICAL: 1/(3L)            I: 1/L
///   GRAD_FLOW  E/CLASSICAL: 1/L               I: 1/L
/// Schemes with no certified rate (C_HR, LOW_C, C_HR_MOD explicit) throw.
double theorem_step_size(OdeFamily family, SchemeRule rule, double mu, double lipschitz);
bool has_theorem_step_size(OdeFamily family, SchemeRule rule);

std::string spec_name(const SchemeSpec& spec);

}  // namespace accelode
