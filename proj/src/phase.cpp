#include "accelode/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace accelode {

const std::vector<OdeFamily>& all_families() {
  static const std::vector<OdeFamily> families = {
      OdeFamily::GRAD_FLOW, OdeFamily::LOW_C,  OdeFamily::LOW_SC, OdeFamily::HB_HR,
      OdeFamily::SC_HR,     OdeFamily::C_HR,   OdeFamily::C_HR_MOD};
  return families;
}

std::string family_name(OdeFamily family) {
  switch (family) {
    case OdeFamily::GRAD_FLOW: return "GRAD_FLOW";
    case OdeFamily::LOW_C: return "LOW_C";
    case OdeFamily::LOW_SC: return "LOW_SC";
    case OdeFamily::HB_HR: return "HB_HR";
    case OdeFamily::SC_HR: return "SC_HR";
    case OdeFamily::C_HR: return "C_HR";
    case OdeFamily::C_HR_MOD: return "C_HR_MOD";
  }
  throw std::logic_error("family_name: unknown family");
}

OdeFamily family_from_name(const std::string& name) {
  for (OdeFamily family : all_families())
    if (family_name(family) == name) return family;
  throw std::invalid_argument("unknown ODE family '" + name + "'");
}

bool requires_strong_convexity(OdeFamily family) {
  return family == OdeFamily::LOW_SC || family == OdeFamily::HB_HR || family == OdeFamily::SC_HR;
}

bool time_varying(OdeFamily family) {
  return family == OdeFamily::LOW_C || family == OdeFamily::C_HR || family == OdeFamily::C_HR_MOD;
}

bool has_gradient_correction(OdeFamily family) {
  return family == OdeFamily::SC_HR || family == OdeFamily::C_HR || family == OdeFamily::C_HR_MOD;
}

namespace {

bool needs_sqrt_s(OdeFamily family) {
  // Families whose update carries explicit sqrt(s) coefficients.
  return family == OdeFamily::HB_HR || has_gradient_correction(family);
}

}  // namespace

double time_origin(OdeFamily family, double s) {
  if (family == OdeFamily::C_HR || family == OdeFamily::C_HR_MOD) return 1.5 * std::sqrt(s);
  return 0.0;
}

PhaseState vector_field(OdeFamily family, const Objective& obj, double s, double t,
                        const PhaseState& state) {
  // s = 0 is deliberately legal: it collapses each high-resolution field onto
  // its low-resolution limit, which the reduction tests rely on.
  if (!state.finite()) throw std::invalid_argument("vector_field: state must be finite");
  if (s < 0.0) throw std::invalid_argument("vector_field: step parameter must be nonnegative");
  if (requires_strong_convexity(family) && obj.mu <= 0.0)
    throw std::invalid_argument("vector_field: this family needs a strongly convex objective");
  if (t < time_origin(family, s) - 1e-15)
    throw std::invalid_argument("vector_field: time precedes the family's start time");

  const Vector& x = state.x;
  const Vector& v = state.v;
  const double sqrt_s = std::sqrt(s);

  if (family == OdeFamily::GRAD_FLOW)
    return PhaseState{-obj.gradient(x), Vector::Zero(x.size())};

  Vector dv;
  switch (family) {
    case OdeFamily::LOW_C:
      dv = -(3.0 / t) * v - obj.gradient(x);
      break;
    case OdeFamily::LOW_SC:
      dv = -2.0 * std::sqrt(obj.mu) * v - obj.gradient(x);
      break;
    case OdeFamily::HB_HR:
      dv = -2.0 * std::sqrt(obj.mu) * v -
           (1.0 + std::sqrt(obj.mu * s)) * obj.gradient(x);
      break;
    case OdeFamily::SC_HR:
      dv = -2.0 * std::sqrt(obj.mu) * v - sqrt_s * obj.hessian_vector(x, v) -
           (1.0 + std::sqrt(obj.mu * s)) * obj.gradient(x);
      break;
    case OdeFamily::C_HR:
      dv = -(3.0 / t) * v - sqrt_s * obj.hessian_vector(x, v) -
           (1.0 + 1.5 * sqrt_s / t) * obj.gradient(x);
      break;
    case OdeFamily::C_HR_MOD:
      dv = -(3.0 / t) * v - sqrt_s * obj.hessian_vector(x, v) -
           (1.0 + 3.0 * sqrt_s / t) * obj.gradient(x);
      break;
    default:
      throw std::logic_error("vector_field: unknown family");
  }
  return PhaseState{v, dv};
}

InitialCondition initial_state(OdeFamily family, const Objective& obj, const Vector& x0,
                               double s) {
  if (needs_sqrt_s(family) && s <= 0.0)
    throw std::invalid_argument("initial_state: step parameter must be positive");
  const double sqrt_s = std::sqrt(s);
  PhaseState state{x0, Vector::Zero(x0.size())};
  switch (family) {
    case OdeFamily::SC_HR:
    case OdeFamily::HB_HR:
      state.v = -2.0 * sqrt_s / (1.0 + std::sqrt(obj.mu * s)) * obj.gradient(x0);
      break;
    case OdeFamily::C_HR:
    case OdeFamily::C_HR_MOD:
      state.v = -sqrt_s * obj.gradient(x0);
      break;
    default:
      break;  // zero velocity
  }
  return InitialCondition{state, time_origin(family, s)};
}

}  // namespace accelode
