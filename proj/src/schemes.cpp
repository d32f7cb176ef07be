#include "accelode/schemes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace accelode {

const std::vector<SchemeRule>& all_rules() {
  static const std::vector<SchemeRule> rules = {SchemeRule::SYMPLECTIC, SchemeRule::EXPLICIT,
                                                SchemeRule::IMPLICIT, SchemeRule::CLASSICAL};
  return rules;
}

std::string rule_name(SchemeRule rule) {
  switch (rule) {
    case SchemeRule::SYMPLECTIC: return "SYMPLECTIC";
    case SchemeRule::EXPLICIT: return "EXPLICIT";
    case SchemeRule::IMPLICIT: return "IMPLICIT";
    case SchemeRule::CLASSICAL: return "CLASSICAL";
  }
  throw std::logic_error("rule_name: unknown rule");
}

SchemeRule rule_from_name(const std::string& name) {
  for (SchemeRule rule : all_rules())
    if (rule_name(rule) == name) return rule;
  throw std::invalid_argument("unknown scheme rule '" + name + "'");
}

bool admissible(OdeFamily family, SchemeRule rule) {
  if (family == OdeFamily::GRAD_FLOW)
    return rule == SchemeRule::EXPLICIT || rule == SchemeRule::IMPLICIT ||
           rule == SchemeRule::CLASSICAL;
  if (rule == SchemeRule::CLASSICAL)
    return family == OdeFamily::SC_HR || family == OdeFamily::HB_HR ||
           family == OdeFamily::C_HR_MOD;
  return true;  // SYMPLECTIC/EXPLICIT/IMPLICIT for every second-order family
}

void require_admissible(const SchemeSpec& spec) {
  if (!admissible(spec.family, spec.rule))
    throw std::invalid_argument("scheme " + spec_name(spec) + " is not defined");
  if (!(spec.step_size > 0.0))
    throw std::invalid_argument("scheme step size must be positive");
}

UpdateCoefficients update_coefficients(OdeFamily family, SchemeRule rule, double mu,
                                       double s, long k) {
  const double root_mu_s = std::sqrt(mu * s);
  const bool shifted = time_varying(family) && rule == SchemeRule::EXPLICIT;
  if (shifted && k < 1)
    throw std::invalid_argument(
        "explicit updates of the time-varying families are defined for k >= 1 only");
  const double kd = static_cast<double>(k);
  switch (family) {
    case OdeFamily::LOW_SC:
      return {2.0 * root_mu_s, 0.0, 1.0};
    case OdeFamily::HB_HR:
      return {2.0 * root_mu_s, 0.0, 1.0 + root_mu_s};
    case OdeFamily::SC_HR:
      return {2.0 * root_mu_s, 1.0, 1.0 + root_mu_s};
    case OdeFamily::LOW_C:
      return shifted ? UpdateCoefficients{3.0 / kd, 0.0, 1.0}
                     : UpdateCoefficients{3.0 / (kd + 1.0), 0.0, 1.0};
    case OdeFamily::C_HR:
      return shifted
                 ? UpdateCoefficients{3.0 / kd, 1.0, (2.0 * kd + 3.0) / (2.0 * kd)}
                 : UpdateCoefficients{3.0 / (kd + 1.0), 1.0,
                                      (2.0 * kd + 5.0) / (2.0 * kd + 2.0)};
    case OdeFamily::C_HR_MOD:
      return shifted ? UpdateCoefficients{3.0 / kd, 1.0, (kd + 3.0) / kd}
                     : UpdateCoefficients{3.0 / (kd + 1.0), 1.0, (kd + 4.0) / (kd + 1.0)};
    case OdeFamily::GRAD_FLOW:
      throw std::invalid_argument("gradient flow has no velocity update coefficients");
  }
  throw std::logic_error("update_coefficients: unknown family");
}

bool has_theorem_step_size(OdeFamily family, SchemeRule rule) {
  if (!admissible(family, rule)) return false;
  if (family == OdeFamily::C_HR || family == OdeFamily::LOW_C) return false;
  if (family == OdeFamily::C_HR_MOD && rule == SchemeRule::EXPLICIT) return false;
  return true;
}

double theorem_step_size(OdeFamily family, SchemeRule rule, double mu, double lipschitz) {
  if (!has_theorem_step_size(family, rule))
    throw std::invalid_argument("no certified step size for " +
                                family_name(family) + "/" + rule_name(rule));
  const double lsq = lipschitz * lipschitz;
  switch (family) {
    case OdeFamily::GRAD_FLOW:
      return 1.0 / lipschitz;
    case OdeFamily::SC_HR:
      switch (rule) {
        case SchemeRule::SYMPLECTIC: return 4.0 / (9.0 * lipschitz);
        case SchemeRule::EXPLICIT: return mu / (100.0 * lsq);
        default: return 1.0 / lipschitz;  // IMPLICIT and CLASSICAL
      }
    case OdeFamily::HB_HR:
      switch (rule) {
        case SchemeRule::SYMPLECTIC:
        case SchemeRule::CLASSICAL: return mu / (16.0 * lsq);
        case SchemeRule::EXPLICIT: return mu / (36.0 * lsq);
        default: return 1.0 / lipschitz;
      }
    case OdeFamily::LOW_SC:
      switch (rule) {
        case SchemeRule::SYMPLECTIC: return mu / (16.0 * lsq);
        case SchemeRule::EXPLICIT: return mu / (25.0 * lsq);
        default: return 1.0 / lipschitz;
      }
    case OdeFamily::C_HR_MOD:
      return rule == SchemeRule::IMPLICIT ? 1.0 / lipschitz : 1.0 / (3.0 * lipschitz);
    default:
      throw std::logic_error("theorem_step_size: unreachable");
  }
}

std::string spec_name(const SchemeSpec& spec) {
  std::ostringstream out;
  out << family_name(spec.family) << "/" << rule_name(spec.rule) << " s=" << spec.step_size;
  return out.str();
}

}  // namespace accelode
