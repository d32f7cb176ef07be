#include "accelode/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace accelode {

namespace {

// Every envelope is proportional to ||x0 - x*||^2, so a start at the
// minimizer bounds everything by zero (some rational forms would otherwise
// evaluate 0/0 there).
std::function<double(const BoundInputs&)> zero_guard(std::function<double(const BoundInputs&)> f) {
  return [f = std::move(f)](const BoundInputs& in) {
    return in.d0_sq == 0.0 ? 0.0 : f(in);
  };
}

double geometric_decay(double constant, double base_down, double kt) {
  return constant / std::pow(base_down, kt);
}

// Shared constant of the gradient-corrected explicit/implicit envelopes:
// (3 - 2 sqrt(mu s) + mu s) / (2 + 4 sqrt(mu s) + 2 mu s) * sL + 2 mu/L + (1 + sqrt(mu s))/2.
double corrected_tail_constant(const BoundInputs& in) {
  const double rm = std::sqrt(in.mu * in.s);
  return (3.0 - 2.0 * rm + in.mu * in.s) / (2.0 + 4.0 * rm + 2.0 * in.mu * in.s) *
             in.s * in.lipschitz +
         2.0 * in.mu / in.lipschitz + (1.0 + rm) / 2.0;
}

// Shared constant of the plain-momentum explicit/implicit envelopes:
// 3 sL / (1 + sqrt(mu s))^2 + 2 mu/L + (1 + sqrt(mu s))/2.
double momentum_tail_constant(const BoundInputs& in) {
  const double rm = std::sqrt(in.mu * in.s);
  return 3.0 * in.s * in.lipschitz / ((1.0 + rm) * (1.0 + rm)) + 2.0 * in.mu / in.lipschitz +
         (1.0 + rm) / 2.0;
}

std::vector<RateBound> build_catalog() {
  std::vector<RateBound> out;
  auto add = [&out](RateBound bound) {
    bound.envelope = zero_guard(std::move(bound.envelope));
    out.push_back(std::move(bound));
  };
  const auto gd_rules = std::vector<std::pair<OdeFamily, SchemeRule>>{
      {OdeFamily::GRAD_FLOW, SchemeRule::EXPLICIT}, {OdeFamily::GRAD_FLOW, SchemeRule::CLASSICAL}};

  // --- gradient descent -------------------------------------------------
  {
    RateBound b;
    b.id = "gd-dist-strongly-convex";
    b.applies_to = gd_rules;
    b.needs_strong_convexity = true;
    b.quantity = BoundQuantity::DIST_SQ;
    b.max_step = [](double mu, double L) { return 2.0 / (mu + L); };
    b.step_condition = "0 < s <= 2/(mu + L)";
    b.envelope = [](const BoundInputs& in) {
      const double base = 1.0 - 2.0 * in.mu * in.lipschitz * in.s / (in.mu + in.lipschitz);
      return in.d0_sq * std::pow(base, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "gd-gap-convex";
    b.applies_to = gd_rules;
    b.max_step = [](double /*mu*/, double L) { return 2.0 / L; };
    b.step_condition = "0 < s <= 2/L";
    b.envelope = [](const BoundInputs& in) {
      const double numerator = 2.0 * in.f0_gap * in.d0_sq;
      if (numerator == 0.0) return 0.0;
      return numerator /
             (2.0 * in.d0_sq + in.kt * in.s * (2.0 - in.lipschitz * in.s) * in.f0_gap);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "gd-energy-gap";
    b.applies_to = gd_rules;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.min_index = 1;
    b.envelope = [](const BoundInputs& in) { return in.d0_sq / (2.0 * in.kt * in.s); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "gd-energy-min-grad";
    b.applies_to = gd_rules;
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return 2.0 * in.d0_sq / (in.s * in.s * (in.kt + 1.0) * (in.kt + 2.0));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "implicit-gd-dist-contraction";
    b.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.quantity = BoundQuantity::DIST_SQ;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) {
      return in.d0_sq / std::pow(1.0 + in.mu * in.s, 2.0 * in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "implicit-gd-gap-convex";
    b.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) {
      const double shift = 1.0 + in.lipschitz * in.s;
      const double numerator = shift * shift * in.f0_gap * in.d0_sq;
      if (numerator == 0.0) return 0.0;
      return numerator / (shift * shift * in.d0_sq + in.kt * in.s * in.f0_gap);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "implicit-gd-energy-gap";
    b.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    b.step_condition = "any s > 0";
    b.min_index = 1;
    b.envelope = [](const BoundInputs& in) { return in.d0_sq / (2.0 * in.kt * in.s); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "implicit-gd-energy-min-grad";
    b.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.step_condition = "any s > 0";
    // The energy dissipates through the post-step gradients x_1, x_2, ...;
    // grad f(x_0) never enters, so the minimum starts at iterate 1. (For
    // large s the starting gradient is s-independent and cannot obey an
    // envelope that shrinks like 1/s^2.)
    b.min_index = 1;
    b.min_start = 1;
    b.envelope = [](const BoundInputs& in) {
      return 2.0 * in.d0_sq / (in.s * in.s * in.kt * (in.kt + 1.0));
    };
    add(std::move(b));
  }

  // --- gradient-corrected strongly convex family ------------------------
  {
    RateBound b;
    b.id = "sc-hr-symplectic-gap-theorem-step";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double /*mu*/, double L) { return 4.0 / (9.0 * L); };
    b.step_condition = "s = 4/(9 L)";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(5.0 * in.lipschitz * in.d0_sq,
                             1.0 + std::sqrt(in.mu / in.lipschitz) / 9.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "sc-hr-explicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (100.0 * L * L); };
    b.step_condition = "s = mu/(100 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return 3.0 * in.lipschitz * in.d0_sq *
             std::pow(1.0 - in.mu / (80.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "sc-hr-implicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "s = 1/L";
    // Stated without a lipschitz factor in front, unlike its general-step
    // counterpart; both are kept verbatim.
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(13.0 / 4.0 * in.d0_sq,
                             1.0 + 0.25 * std::sqrt(in.mu / in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "nag-sc-gap";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::CLASSICAL}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "s = 1/L";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(5.0 * in.lipschitz * in.d0_sq,
                             1.0 + std::sqrt(in.mu / in.lipschitz) / 12.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "sc-hr-symplectic-gap";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 4.0 / (9.0 * L); };
    b.step_condition = "0 < s <= 4/(9 L)";
    // The long constant is kept exactly as stated, term for term.
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      const double constant =
          in.s * in.lipschitz * (2.0 + (1.0 + 3.0 * rm) * (1.0 + 3.0 * rm)) /
              ((1.0 + rm) * (1.0 + rm)) +
          2.0 * in.mu / in.lipschitz + (1.0 + rm) / 2.0 -
          in.s * in.lipschitz * (1.0 + rm) * (1.0 + rm) / (2.0 * (1.0 + 2.0 * rm));
      return geometric_decay(constant * in.lipschitz * in.d0_sq, 1.0 + rm / 6.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "sc-hr-explicit-gap";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double mu, double L) { return mu / (100.0 * L * L); };
    b.step_condition = "0 < s <= mu/(100 L^2)";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return corrected_tail_constant(in) * in.lipschitz * in.d0_sq *
             std::pow(1.0 - rm / 8.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "sc-hr-implicit-gap";
    b.applies_to = {{OdeFamily::SC_HR, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return geometric_decay(corrected_tail_constant(in) * in.lipschitz * in.d0_sq,
                             1.0 + rm / 4.0, in.kt);
    };
    add(std::move(b));
  }

  // --- plain-momentum strongly convex family ----------------------------
  {
    RateBound b;
    b.id = "heavy-ball-gap";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::CLASSICAL}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    b.step_condition = "s = mu/(16 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(5.0 * in.lipschitz * in.d0_sq,
                             1.0 + in.mu / (16.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-symplectic-gap-theorem-step";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    b.step_condition = "s = mu/(16 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(3.0 * in.lipschitz * in.d0_sq,
                             1.0 + in.mu / (16.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-explicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (36.0 * L * L); };
    b.step_condition = "s = mu/(36 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return 3.0 * in.lipschitz * in.d0_sq *
             std::pow(1.0 - in.mu / (48.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-implicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "s = 1/L";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(15.0 / 4.0 * in.lipschitz * in.d0_sq,
                             1.0 + 0.25 * std::sqrt(in.mu / in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-symplectic-gap";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    b.step_condition = "0 < s <= mu/(16 L^2)";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      const double constant =
          (3.0 + 8.0 * rm + 8.0 * in.mu * in.s) * in.s * in.lipschitz /
              ((1.0 + rm) * (1.0 + rm)) +
          2.0 * in.mu / in.lipschitz + (1.0 + rm) / 2.0;
      return geometric_decay(constant * in.lipschitz * in.d0_sq, 1.0 + rm / 4.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-explicit-gap";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double mu, double L) { return mu / (36.0 * L * L); };
    b.step_condition = "0 < s <= mu/(36 L^2)";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return momentum_tail_constant(in) * in.lipschitz * in.d0_sq *
             std::pow(1.0 - rm / 8.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "hb-hr-implicit-gap";
    b.applies_to = {{OdeFamily::HB_HR, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return geometric_decay(momentum_tail_constant(in) * in.lipschitz * in.d0_sq,
                             1.0 + rm / 4.0, in.kt);
    };
    add(std::move(b));
  }

  // --- modified gradient-corrected convex family ------------------------
  {
    RateBound b;
    b.id = "c-hr-mod-symplectic-gap";
    b.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::SYMPLECTIC},
                    {OdeFamily::C_HR_MOD, SchemeRule::CLASSICAL}};
    b.max_step = [](double /*mu*/, double L) { return 1.0 / (3.0 * L); };
    b.step_condition = "0 < s <= 1/(3 L)";
    b.envelope = [](const BoundInputs& in) {
      return 119.0 * in.d0_sq / (in.s * (in.kt + 1.0) * (in.kt + 1.0));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "c-hr-mod-symplectic-min-grad";
    b.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::SYMPLECTIC},
                    {OdeFamily::C_HR_MOD, SchemeRule::CLASSICAL}};
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / (3.0 * L); };
    b.step_condition = "0 < s <= 1/(3 L)";
    b.envelope = [](const BoundInputs& in) {
      return 8568.0 * in.d0_sq /
             (in.s * in.s * (in.kt + 1.0) * (in.kt + 1.0) * (in.kt + 1.0));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "c-hr-mod-implicit-gap";
    b.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::IMPLICIT}};
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return (3.0 * in.s * in.lipschitz + 2.0) * in.d0_sq /
             (in.s * (in.kt + 2.0) * (in.kt + 3.0));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "c-hr-mod-implicit-min-grad";
    b.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::IMPLICIT}};
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return (3.0 * in.s * in.lipschitz + 2.0) * in.d0_sq /
             (in.s * in.s * (in.kt + 1.0) * (in.kt + 1.0) * (in.kt + 1.0));
    };
    add(std::move(b));
  }

  // --- low-resolution strongly convex family ----------------------------
  {
    RateBound b;
    b.id = "low-sc-symplectic-gap";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    b.step_condition = "0 < s <= mu/(16 L^2)";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return geometric_decay(1.5 * in.lipschitz * in.d0_sq, 1.0 + rm / 4.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "low-sc-explicit-gap";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double mu, double L) { return mu / (25.0 * L * L); };
    b.step_condition = "0 < s <= mu/(25 L^2)";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return 1.5 * in.lipschitz * in.d0_sq * std::pow(1.0 - rm / 8.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "low-sc-implicit-gap";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      const double rm = std::sqrt(in.mu * in.s);
      return geometric_decay(1.5 * in.lipschitz * in.d0_sq, 1.0 + rm / 4.0, in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "low-sc-symplectic-gap-theorem-step";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::SYMPLECTIC}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    b.step_condition = "s = mu/(16 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(1.5 * in.lipschitz * in.d0_sq,
                             1.0 + in.mu / (16.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "low-sc-explicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::EXPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double mu, double L) { return mu / (25.0 * L * L); };
    b.step_condition = "s = mu/(25 L^2)";
    b.envelope = [](const BoundInputs& in) {
      return 1.5 * in.lipschitz * in.d0_sq *
             std::pow(1.0 - in.mu / (40.0 * in.lipschitz), in.kt);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "low-sc-implicit-gap-theorem-step";
    b.applies_to = {{OdeFamily::LOW_SC, SchemeRule::IMPLICIT}};
    b.needs_strong_convexity = true;
    b.fixed_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "s = 1/L";
    b.envelope = [](const BoundInputs& in) {
      return geometric_decay(1.5 * in.lipschitz * in.d0_sq,
                             1.0 + 0.25 * std::sqrt(in.mu / in.lipschitz), in.kt);
    };
    add(std::move(b));
  }

  // --- continuous-time rates --------------------------------------------
  {
    RateBound b;
    b.id = "flow-gd-dist-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::GRAD_FLOW;
    b.needs_strong_convexity = true;
    b.quantity = BoundQuantity::DIST_SQ;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) { return in.d0_sq * std::exp(-2.0 * in.mu * in.kt); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-gd-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::GRAD_FLOW;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) {
      if (in.f0_gap == 0.0) return 0.0;
      return in.f0_gap * in.d0_sq / (in.kt * in.f0_gap + in.d0_sq);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-gd-energy-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::GRAD_FLOW;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) { return in.d0_sq / (2.0 * in.kt); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-gd-min-grad-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::GRAD_FLOW;
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) { return in.d0_sq / (in.kt * in.kt); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-sc-hr-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::SC_HR;
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return 2.0 * in.d0_sq / in.s * std::exp(-std::sqrt(in.mu) * in.kt / 4.0);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-hb-hr-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::HB_HR;
    b.needs_strong_convexity = true;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return 3.5 * in.d0_sq / in.s * std::exp(-std::sqrt(in.mu) * in.kt / 4.0);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-c-hr-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::C_HR;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      return (4.0 + 3.0 * in.s * in.lipschitz) * in.d0_sq /
             (in.kt * (2.0 * in.kt + std::sqrt(in.s)));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-c-hr-min-grad-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::C_HR;
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    b.step_condition = "0 < s <= 1/L";
    b.envelope = [](const BoundInputs& in) {
      const double t0 = 1.5 * std::sqrt(in.s);
      return (12.0 + 9.0 * in.s * in.lipschitz) * in.d0_sq /
             (2.0 * std::sqrt(in.s) * (in.kt * in.kt * in.kt - t0 * t0 * t0));
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-low-sc-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::LOW_SC;
    b.needs_strong_convexity = true;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) {
      return 1.5 * in.lipschitz * in.d0_sq * std::exp(-std::sqrt(in.mu) * in.kt / 4.0);
    };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-low-c-gap-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::LOW_C;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) { return 2.0 * in.d0_sq / (in.kt * in.kt); };
    add(std::move(b));
  }
  {
    RateBound b;
    b.id = "flow-low-c-min-grad-bound";
    b.continuous = true;
    b.flow_family = OdeFamily::LOW_C;
    b.quantity = BoundQuantity::MIN_GRAD_SQ;
    b.step_condition = "any s > 0";
    b.envelope = [](const BoundInputs& in) {
      return 4.0 * in.lipschitz * in.d0_sq / (in.kt * in.kt);
    };
    add(std::move(b));
  }
  return out;
}

// Ratio bookkeeping shared by the discrete and continuous checks. Returns
// true on violation; `ratio` is clamped to 0 when the envelope is infinite
// (or zero with the quantity inside the slack).
bool classify_point(double quantity, double envelope, double abs_slack, double& ratio) {
  if (std::isnan(envelope)) envelope = 0.0;
  if (std::isinf(envelope)) {
    ratio = 0.0;
    return false;
  }
  const bool ok = quantity <= envelope * (1.0 + 1e-9) + abs_slack;
  if (envelope > 0.0) {
    ratio = quantity / envelope;
  } else {
    ratio = ok ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return !ok;
}

double quantity_value(BoundQuantity quantity, const Objective& obj, const Vector& x,
                      double f_gap, double grad_norm_sq, double& running_min_grad) {
  switch (quantity) {
    case BoundQuantity::F_GAP: return f_gap;
    case BoundQuantity::DIST_SQ: return obj.dist_sq(x);
    case BoundQuantity::MIN_GRAD_SQ:
      running_min_grad = std::min(running_min_grad, grad_norm_sq);
      return running_min_grad;
  }
  throw std::invalid_argument("quantity_value: unknown quantity");
}

}  // namespace

std::string bound_quantity_name(BoundQuantity quantity) {
  switch (quantity) {
    case BoundQuantity::F_GAP: return "f-gap";
    case BoundQuantity::DIST_SQ: return "dist-sq";
    case BoundQuantity::MIN_GRAD_SQ: return "min-grad-sq";
  }
  throw std::invalid_argument("bound_quantity_name: unknown quantity");
}

const std::vector<RateBound>& bound_catalog() {
  static const std::vector<RateBound> catalog = build_catalog();
  return catalog;
}

const RateBound& bound_by_id(const std::string& id) {
  for (const RateBound& bound : bound_catalog()) {
    if (bound.id == id) return bound;
  }
  throw std::invalid_argument("bound_by_id: no rate bound named " + id);
}

std::vector<const RateBound*> bounds_for(OdeFamily family, SchemeRule rule) {
  std::vector<const RateBound*> out;
  for (const RateBound& bound : bound_catalog()) {
    for (const auto& pair : bound.applies_to) {
      if (pair.first == family && pair.second == rule) {
        out.push_back(&bound);
        break;
      }
    }
  }
  return out;
}

std::vector<const RateBound*> flow_bounds_for(OdeFamily family) {
  std::vector<const RateBound*> out;
  for (const RateBound& bound : bound_catalog()) {
    if (bound.continuous && bound.flow_family == family) out.push_back(&bound);
  }
  return out;
}

BoundReport check_bound(const RateBound& bound, const Trace& trace,
                        const ProblemInstance& problem) {
  if (bound.continuous) {
    throw std::invalid_argument("check_bound: " + bound.id +
                                " is a continuous-time bound; check it along a flow");
  }
  BoundReport report;
  report.bound_id = bound.id;
  const SchemeSpec& spec = trace.spec;
  const bool stated = std::any_of(
      bound.applies_to.begin(), bound.applies_to.end(),
      [&spec](const auto& pair) { return pair.first == spec.family && pair.second == spec.rule; });
  if (!stated) {
    report.reason = "bound is not stated for scheme " + spec_name(spec);
    return report;
  }
  const Objective& obj = problem.objective;
  if (bound.needs_strong_convexity && obj.mu <= 0.0) {
    report.reason = "objective is not strongly convex";
    return report;
  }
  const double s = spec.step_size;
  if (bound.fixed_step) {
    const double stated_s = bound.fixed_step(obj.mu, obj.lipschitz);
    if (std::abs(s - stated_s) > 1e-12 * stated_s) {
      report.reason = "bound is stated at step size " + bound.step_condition;
      return report;
    }
  }
  if (bound.max_step && s > bound.max_step(obj.mu, obj.lipschitz) * (1.0 + 1e-12)) {
    report.reason = "step size exceeds the stated range " + bound.step_condition;
    return report;
  }
  report.applicable = true;

  BoundInputs in;
  in.mu = obj.mu;
  in.lipschitz = obj.lipschitz;
  in.d0_sq = problem.d0_sq();
  in.f0_gap = problem.f0_gap();
  in.s = s;
  double running_min = std::numeric_limits<double>::infinity();
  for (const TraceRecord& record : trace.records) {
    if (record.k < bound.min_start) continue;
    const double quantity = quantity_value(bound.quantity, obj, record.state.x, record.f_gap,
                                           record.grad_norm_sq, running_min);
    if (record.k < bound.min_index) continue;
    in.kt = static_cast<double>(record.k);
    double ratio = 0.0;
    const bool violated = classify_point(quantity, bound.envelope(in), 1e-18, ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (violated && report.first_violation_k < 0) {
      report.first_violation_k = record.k;
      report.first_violation_t = record.t;
    }
    ++report.points_checked;
  }
  report.pass = report.first_violation_k < 0;
  return report;
}

BoundReport check_bound(const RateBound& bound, const FlowTrace& flow,
                        const ProblemInstance& problem, double extra_slack) {
  if (!bound.continuous) {
    throw std::invalid_argument("check_bound: " + bound.id +
                                " is a discrete-time bound; check it against a trace");
  }
  BoundReport report;
  report.bound_id = bound.id;
  if (bound.flow_family != flow.family) {
    report.reason = "bound is stated for the " + family_name(bound.flow_family) + " flow";
    return report;
  }
  const Objective& obj = problem.objective;
  if (bound.needs_strong_convexity && obj.mu <= 0.0) {
    report.reason = "objective is not strongly convex";
    return report;
  }
  if (bound.max_step && flow.s > bound.max_step(obj.mu, obj.lipschitz) * (1.0 + 1e-12)) {
    report.reason = "step size exceeds the stated range " + bound.step_condition;
    return report;
  }
  report.applicable = true;

  BoundInputs in;
  in.mu = obj.mu;
  in.lipschitz = obj.lipschitz;
  in.d0_sq = problem.d0_sq();
  in.f0_gap = problem.f0_gap();
  in.s = flow.s;
  double running_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < flow.samples.size(); ++i) {
    const FlowSample& sample = flow.samples[i];
    const double quantity = quantity_value(bound.quantity, obj, sample.state.x, sample.f_gap,
                                           sample.grad_norm_sq, running_min);
    in.kt = sample.t;
    double ratio = 0.0;
    const bool violated =
        classify_point(quantity, bound.envelope(in), extra_slack + 1e-18, ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (violated && report.first_violation_k < 0) {
      report.first_violation_k = static_cast<long>(i);
      report.first_violation_t = sample.t;
    }
    ++report.points_checked;
  }
  report.pass = report.first_violation_k < 0;
  return report;
}

RateFit fit_rate(const Trace& trace, double tail_fraction) {
  if (trace.termination != Termination::COMPLETED) {
    throw std::invalid_argument("fit_rate: trace did not complete");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw std::invalid_argument("fit_rate: tail fraction must lie in (0, 1]");
  }
  if (trace.records.empty()) throw std::invalid_argument("fit_rate: empty trace");

  const long last_k = trace.records.back().k;
  const long k_lo = last_k - static_cast<long>(std::floor(tail_fraction * static_cast<double>(last_k)));
  std::vector<std::pair<double, double>> points;
  for (const TraceRecord& record : trace.records) {
    if (record.k < k_lo) continue;
    if (!(record.f_gap > 1e-280)) break;  // window truncated at underflow
    points.emplace_back(static_cast<double>(record.k), std::log(record.f_gap));
  }
  RateFit fit;
  if (points.size() < 2) return fit;  // degenerate: nothing left to regress on

  double mean_k = 0.0;
  double mean_y = 0.0;
  for (const auto& [k, y] : points) {
    mean_k += k;
    mean_y += y;
  }
  mean_k /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double cov = 0.0;
  double var = 0.0;
  for (const auto& [k, y] : points) {
    cov += (k - mean_k) * (y - mean_y);
    var += (k - mean_k) * (k - mean_k);
  }
  const double slope = cov / var;
  double sq_residual = 0.0;
  for (const auto& [k, y] : points) {
    const double predicted = mean_y + slope * (k - mean_k);
    sq_residual += (y - predicted) * (y - predicted);
  }
  fit.degenerate = false;
  fit.rho_hat = std::exp(slope);
  fit.k_lo = static_cast<long>(points.front().first);
  fit.k_hi = static_cast<long>(points.back().first);
  fit.residual = std::sqrt(sq_residual / static_cast<double>(points.size()));
  return fit;
}

Matrix mode_matrix(const SchemeSpec& spec, double eigenvalue, double mu, double s) {
  if (!admissible(spec.family, spec.rule)) {
    throw std::invalid_argument("mode_matrix: scheme " + spec_name(spec) + " is not defined");
  }
  if (s <= 0.0) throw std::invalid_argument("mode_matrix: s must be positive");
  if (mu < 0.0) throw std::invalid_argument("mode_matrix: mu must be nonnegative");
  const double lam = eigenvalue;
  const double rs = std::sqrt(s);

  if (spec.family == OdeFamily::GRAD_FLOW) {
    Matrix m(1, 1);
    m(0, 0) = spec.rule == SchemeRule::IMPLICIT ? 1.0 / (1.0 + s * lam) : 1.0 - s * lam;
    return m;
  }

  Matrix m(2, 2);
  if (spec.rule == SchemeRule::CLASSICAL && spec.family != OdeFamily::C_HR_MOD) {
    // Momentum-solved NAG-SC / heavy-ball forms.
    const double rm = std::sqrt(mu * s);
    const double beta = (1.0 - rm) / (1.0 + rm);
    const double vv = spec.family == OdeFamily::SC_HR ? beta * (1.0 - s * lam) - s * lam
                                                      : beta - s * lam;
    m << 1.0, rs, -rs * lam, vv;
    return m;
  }

  SchemeRule rule = spec.rule == SchemeRule::CLASSICAL ? SchemeRule::SYMPLECTIC : spec.rule;
  UpdateCoefficients co;
  if (time_varying(spec.family)) {
    // k-dependent coefficients: damping 3/(k+1) -> 0 and the gradient weight
    // -> 1, so the limit map governs the late iterates.
    co.a = 0.0;
    co.gd = has_gradient_correction(spec.family) ? 1.0 : 0.0;
    co.c = 1.0;
  } else {
    co = update_coefficients(spec.family, rule, mu, s, 1);
  }

  switch (rule) {
    case SchemeRule::SYMPLECTIC:
      m << 1.0, rs,  //
          -rs * co.c * lam / (1.0 + co.a), (1.0 - s * lam * (co.gd + co.c)) / (1.0 + co.a);
      return m;
    case SchemeRule::EXPLICIT:
      m << 1.0, rs,  //
          -rs * co.c * lam, 1.0 - co.a - s * co.gd * lam;
      return m;
    case SchemeRule::IMPLICIT: {
      const double denom = 1.0 + co.a + s * lam * (co.gd + co.c);
      m << (denom - s * co.c * lam) / denom, rs / denom,  //
          -rs * co.c * lam / denom, 1.0 / denom;
      return m;
    }
    default: throw std::invalid_argument("mode_matrix: unsupported rule");
  }
}

SpectralReport spectral_radius(const SchemeSpec& spec, double eigenvalue, double mu, double s) {
  const Matrix m = mode_matrix(spec, eigenvalue, mu, s);
  SpectralReport report;
  report.asymptotic = time_varying(spec.family);
  report.warned = eigenvalue <= 0.0 || eigenvalue < mu * (1.0 - 1e-12);

  if (m.rows() == 1) {
    report.radius = std::abs(m(0, 0));
    report.real_dominant = true;
    return report;
  }
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    report.radius = std::max(std::abs((tr + root) / 2.0), std::abs((tr - root) / 2.0));
    report.real_dominant = true;
  } else {
    report.radius = std::sqrt(det);  // complex pair with modulus sqrt(det)
    report.real_dominant = false;
  }
  return report;
}

}  // namespace accelode
