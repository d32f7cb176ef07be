#include "accelode/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace accelode {

namespace {

const TraceRecord& need_record(const Trace& trace, long k) {
  const TraceRecord* rec = trace.record_at(k);
  if (rec == nullptr) {
    throw std::invalid_argument("lyapunov: trace has no record at index " + std::to_string(k) +
                                " (thinned below the functional's window or beyond the last step)");
  }
  return *rec;
}

// 1/4 ||v||^2 + 1/4 ||2 sqrt(mu)(anchor - x*) + v + sqrt(s) grad f(x_k)||^2
//   + (1 + sqrt(mu s)) (f(x_k) - f*)
// The gradient-corrected energy shape shared by the SC_HR schemes; `anchor`
// is x_k or x_{k+1} depending on the scheme's inequality.
double gradient_corrected_energy(const Objective& obj, double s, const Vector& anchor,
                                 const Vector& xk, const Vector& vk) {
  const double root_mu = std::sqrt(obj.mu);
  const Vector w = 2.0 * root_mu * (anchor - *obj.minimizer) + vk + std::sqrt(s) * obj.gradient(xk);
  return 0.25 * vk.squaredNorm() + 0.25 * w.squaredNorm() +
         (1.0 + std::sqrt(obj.mu * s)) * obj.f_gap(xk);
}

// 1/4 ||v||^2 + 1/4 ||2 sqrt(mu)(anchor - x*) + v||^2 + weight (f(x_k) - f*)
// with weight = 1 + sqrt(mu s) for the high-resolution heavy-ball energies
// and weight = 1 for the low-resolution ones.
double momentum_energy(const Objective& obj, double s, const Vector& anchor, const Vector& xk,
                       const Vector& vk, bool high_resolution_weight) {
  const double root_mu = std::sqrt(obj.mu);
  const Vector w = 2.0 * root_mu * (anchor - *obj.minimizer) + vk;
  const double weight = high_resolution_weight ? 1.0 + std::sqrt(obj.mu * s) : 1.0;
  return 0.25 * vk.squaredNorm() + 0.25 * w.squaredNorm() + weight * obj.f_gap(xk);
}

// f_coef * s * (f(x_k) - f*) + 1/2 ||2 (anchor - x*) + n_coef sqrt(s) (v_k [+ sqrt(s) grad])||^2
// The convex time-varying energy shape; the gradient term rides along only
// for the gradient-corrected families.
double scaled_energy(const Objective& obj, double s, double f_coef, double n_coef,
                     const Vector& anchor, const Vector& xk, const Vector& vk, bool with_gradient) {
  Vector slot = vk;
  if (with_gradient) slot += std::sqrt(s) * obj.gradient(xk);
  const Vector w = 2.0 * (anchor - *obj.minimizer) + n_coef * std::sqrt(s) * slot;
  return f_coef * s * obj.f_gap(xk) + 0.5 * w.squaredNorm();
}

double rate_quarter(double mu, double /*L*/, double s) { return std::sqrt(mu * s) / 4.0; }
double rate_sixth(double mu, double /*L*/, double s) { return std::sqrt(mu * s) / 6.0; }
double rate_eighth(double mu, double /*L*/, double s) { return std::sqrt(mu * s) / 8.0; }

std::vector<LyapunovSpec> build_catalog() {
  std::vector<LyapunovSpec> out;

  // --- SC_HR (gradient-corrected, strongly convex) ---------------------
  {
    LyapunovSpec spec;
    spec.id = "sc-hr-symplectic-energy";
    spec.applies_to = {{OdeFamily::SC_HR, SchemeRule::SYMPLECTIC}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double /*mu*/, double L) { return 4.0 / (9.0 * L); };
    spec.step_condition = "s <= 4/(9L)";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_sixth;
    spec.window = 1;
    spec.status = FunctionalStatus::PROVED;
    // Anchored at x_{k+1}, with the sharp negative gradient term that makes
    // the contraction work right up to s = 4/(9L).
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      const double root_mus = std::sqrt(obj.mu * s);
      const double sharp = (1.0 + root_mus) * (1.0 + root_mus) / (1.0 + 2.0 * root_mus);
      return gradient_corrected_energy(obj, s, nxt.state.x, cur.state.x, cur.state.v) -
             sharp * (s / 2.0) * obj.grad_norm_sq(cur.state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "sc-hr-explicit-energy";
    spec.applies_to = {{OdeFamily::SC_HR, SchemeRule::EXPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (100.0 * L * L); };
    spec.step_condition = "s <= mu/(100 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_CURR;
    spec.rate = rate_eighth;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return gradient_corrected_energy(obj, s, cur.state.x, cur.state.x, cur.state.v);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "sc-hr-implicit-energy";
    spec.applies_to = {{OdeFamily::SC_HR, SchemeRule::IMPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    spec.step_condition = "s <= 1/L";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return gradient_corrected_energy(obj, s, cur.state.x, cur.state.x, cur.state.v);
    };
    out.push_back(std::move(spec));
  }

  // --- HB_HR (heavy-ball, strongly convex) ------------------------------
  {
    LyapunovSpec spec;
    spec.id = "hb-hr-symplectic-energy";
    spec.applies_to = {{OdeFamily::HB_HR, SchemeRule::SYMPLECTIC}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    spec.step_condition = "s <= mu/(16 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return momentum_energy(obj, s, cur.state.x, cur.state.x, cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "hb-hr-symplectic-energy-shifted";
    spec.applies_to = {{OdeFamily::HB_HR, SchemeRule::SYMPLECTIC}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    spec.step_condition = "s <= mu/(16 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.window = 1;
    spec.status = FunctionalStatus::EXPLORATORY;
    // x_{k+1} anchored variant, checked numerically alongside the stated one.
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      return momentum_energy(obj, s, nxt.state.x, cur.state.x, cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "hb-hr-explicit-energy";
    spec.applies_to = {{OdeFamily::HB_HR, SchemeRule::EXPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (36.0 * L * L); };
    spec.step_condition = "s <= mu/(36 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_CURR;
    spec.rate = rate_eighth;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return momentum_energy(obj, s, cur.state.x, cur.state.x, cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "hb-hr-implicit-energy";
    spec.applies_to = {{OdeFamily::HB_HR, SchemeRule::IMPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    spec.step_condition = "s <= 1/L";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.window = 1;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      return momentum_energy(obj, s, nxt.state.x, cur.state.x, cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }

  // --- LOW_SC (low-resolution momentum, strongly convex) ----------------
  {
    LyapunovSpec spec;
    spec.id = "low-sc-symplectic-energy";
    spec.applies_to = {{OdeFamily::LOW_SC, SchemeRule::SYMPLECTIC}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    spec.step_condition = "s <= mu/(16 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return momentum_energy(obj, s, cur.state.x, cur.state.x, cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-sc-symplectic-energy-shifted";
    spec.applies_to = {{OdeFamily::LOW_SC, SchemeRule::SYMPLECTIC}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (16.0 * L * L); };
    spec.step_condition = "s <= mu/(16 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.window = 1;
    spec.status = FunctionalStatus::EXPLORATORY;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      return momentum_energy(obj, s, nxt.state.x, cur.state.x, cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-sc-explicit-energy";
    spec.applies_to = {{OdeFamily::LOW_SC, SchemeRule::EXPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double mu, double L) { return mu / (25.0 * L * L); };
    spec.step_condition = "s <= mu/(25 L^2)";
    spec.mode = ContractionMode::DIFFERENCE_CURR;
    spec.rate = rate_eighth;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return momentum_energy(obj, s, cur.state.x, cur.state.x, cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-sc-implicit-energy";
    spec.applies_to = {{OdeFamily::LOW_SC, SchemeRule::IMPLICIT}};
    spec.needs_strong_convexity = true;
    spec.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    spec.step_condition = "s <= 1/L";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    spec.rate = rate_quarter;
    spec.window = 1;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      return momentum_energy(obj, s, nxt.state.x, cur.state.x, cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }

  // --- C_HR_MOD implicit (convex, monotone with surplus) ----------------
  {
    LyapunovSpec spec;
    spec.id = "c-hr-mod-implicit-energy";
    spec.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::IMPLICIT}};
    spec.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    spec.step_condition = "s <= 1/L";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk + 2.0) * (kk + 3.0), kk + 1.0, cur.state.x, cur.state.x,
                           cur.state.v, true);
    };
    spec.surplus = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& nxt = need_record(tr, k + 1);
      const double kk = static_cast<double>(k);
      return (s * s / 2.0) * (kk + 3.0) * (3.0 * kk + 7.0) * obj.grad_norm_sq(nxt.state.x);
    };
    out.push_back(std::move(spec));
  }

  // --- Gradient descent (convex, monotone with surplus) -----------------
  {
    LyapunovSpec spec;
    spec.id = "gd-energy";
    spec.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::EXPLICIT},
                       {OdeFamily::GRAD_FLOW, SchemeRule::CLASSICAL}};
    spec.max_step = [](double /*mu*/, double L) { return 1.0 / L; };
    spec.step_condition = "s <= 1/L";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    // k s (f(x_k) - f*) + 1/2 ||x_k - x*||^2
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return static_cast<double>(k) * s * obj.f_gap(cur.state.x) + 0.5 * obj.dist_sq(cur.state.x);
    };
    spec.surplus = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return (s * s / 2.0) * (static_cast<double>(k) + 1.0) * obj.grad_norm_sq(cur.state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "implicit-gd-dist";
    spec.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    spec.needs_strong_convexity = true;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::DIFFERENCE_NEXT;
    // ||x_{k+1} - x*||^2 <= ||x_k - x*||^2 / (1 + mu s)^2 rearranged.
    spec.rate = [](double mu, double /*L*/, double s) { return 2.0 * mu * s + mu * mu * s * s; };
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double /*s*/, const Trace& tr, long k) {
      return obj.dist_sq(need_record(tr, k).state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "implicit-gd-energy";
    spec.applies_to = {{OdeFamily::GRAD_FLOW, SchemeRule::IMPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      return static_cast<double>(k) * s * obj.f_gap(cur.state.x) + 0.5 * obj.dist_sq(cur.state.x);
    };
    spec.surplus = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& nxt = need_record(tr, k + 1);
      return (s * s / 2.0) * (static_cast<double>(k) + 1.0) * obj.grad_norm_sq(nxt.state.x);
    };
    out.push_back(std::move(spec));
  }

  // --- Failure diagnostics ----------------------------------------------
  // The decrease proofs break down for these schemes; the functionals are
  // kept to record where monotonicity actually fails (or, for the implicit
  // pair, to record that the added numerical damping keeps them monotone).
  {
    LyapunovSpec spec;
    spec.id = "c-hr-mod-explicit-energy-diagnostic";
    spec.applies_to = {{OdeFamily::C_HR_MOD, SchemeRule::EXPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk - 2.0) * (kk + 1.0), kk - 1.0, cur.state.x, cur.state.x,
                           cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "c-hr-symplectic-energy-diagnostic";
    spec.applies_to = {{OdeFamily::C_HR, SchemeRule::SYMPLECTIC}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.window = 1;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk + 1.0) * (kk + 1.5), kk + 1.0, nxt.state.x, cur.state.x,
                           cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "c-hr-explicit-energy-diagnostic";
    spec.applies_to = {{OdeFamily::C_HR, SchemeRule::EXPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk - 2.0) * (kk - 0.5), kk - 1.0, cur.state.x, cur.state.x,
                           cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "c-hr-implicit-energy-diagnostic";
    spec.applies_to = {{OdeFamily::C_HR, SchemeRule::IMPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk + 2.0) * (kk + 1.5), kk + 1.0, cur.state.x, cur.state.x,
                           cur.state.v, true);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-c-symplectic-energy-diagnostic";
    spec.applies_to = {{OdeFamily::LOW_C, SchemeRule::SYMPLECTIC}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.window = 1;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const TraceRecord& nxt = need_record(tr, k + 1);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk + 1.0) * (kk + 1.0), kk + 1.0, nxt.state.x, cur.state.x,
                           cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-c-explicit-energy-diagnostic";
    spec.applies_to = {{OdeFamily::LOW_C, SchemeRule::EXPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk - 2.0) * (kk - 1.0), kk - 1.0, cur.state.x, cur.state.x,
                           cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "low-c-implicit-energy-diagnostic";
    spec.applies_to = {{OdeFamily::LOW_C, SchemeRule::IMPLICIT}};
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::EXPECTED_FAILURE;
    spec.evaluate = [](const Objective& obj, double s, const Trace& tr, long k) {
      const TraceRecord& cur = need_record(tr, k);
      const double kk = static_cast<double>(k);
      return scaled_energy(obj, s, (kk + 1.0) * (kk + 2.0), kk + 1.0, cur.state.x, cur.state.x,
                           cur.state.v, false);
    };
    out.push_back(std::move(spec));
  }

  // --- Continuous flow energies -----------------------------------------
  {
    LyapunovSpec spec;
    spec.id = "flow-gd-dist";
    spec.continuous = true;
    spec.flow_family = OdeFamily::GRAD_FLOW;
    spec.needs_strong_convexity = true;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate_flow = [](const Objective& obj, double /*t*/, const PhaseState& state) {
      return obj.dist_sq(state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "flow-gd-gap";
    spec.continuous = true;
    spec.flow_family = OdeFamily::GRAD_FLOW;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    spec.evaluate_flow = [](const Objective& obj, double /*t*/, const PhaseState& state) {
      return obj.f_gap(state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "flow-gd-energy";
    spec.continuous = true;
    spec.flow_family = OdeFamily::GRAD_FLOW;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    // t (f(X) - f*) + 1/2 ||X - x*||^2
    spec.evaluate_flow = [](const Objective& obj, double t, const PhaseState& state) {
      return t * obj.f_gap(state.x) + 0.5 * obj.dist_sq(state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "flow-low-sc-energy";
    spec.continuous = true;
    spec.flow_family = OdeFamily::LOW_SC;
    spec.needs_strong_convexity = true;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    // 1/4 ||V||^2 + 1/4 ||2 sqrt(mu)(X - x*) + V||^2 + f(X) - f*
    spec.evaluate_flow = [](const Objective& obj, double /*t*/, const PhaseState& state) {
      const Vector w = 2.0 * std::sqrt(obj.mu) * (state.x - *obj.minimizer) + state.v;
      return 0.25 * state.v.squaredNorm() + 0.25 * w.squaredNorm() + obj.f_gap(state.x);
    };
    out.push_back(std::move(spec));
  }
  {
    LyapunovSpec spec;
    spec.id = "flow-low-c-energy";
    spec.continuous = true;
    spec.flow_family = OdeFamily::LOW_C;
    spec.step_condition = "any s > 0";
    spec.mode = ContractionMode::MONOTONE;
    spec.status = FunctionalStatus::PROVED;
    // t^2 (f(X) - f*) + 1/2 ||2 (X - x*) + t V||^2
    spec.evaluate_flow = [](const Objective& obj, double t, const PhaseState& state) {
      const Vector w = 2.0 * (state.x - *obj.minimizer) + t * state.v;
      return t * t * obj.f_gap(state.x) + 0.5 * w.squaredNorm();
    };
    out.push_back(std::move(spec));
  }

  return out;
}

}  // namespace

std::string functional_status_name(FunctionalStatus status) {
  switch (status) {
    case FunctionalStatus::PROVED: return "proved";
    case FunctionalStatus::EXPLORATORY: return "exploratory";
    case FunctionalStatus::EXPECTED_FAILURE: return "expected-failure";
  }
  throw std::invalid_argument("functional_status_name: unknown status");
}

std::string contraction_mode_name(ContractionMode mode) {
  switch (mode) {
    case ContractionMode::DIFFERENCE_NEXT: return "difference-next";
    case ContractionMode::DIFFERENCE_CURR: return "difference-curr";
    case ContractionMode::MONOTONE: return "monotone";
  }
  throw std::invalid_argument("contraction_mode_name: unknown mode");
}

const std::vector<LyapunovSpec>& lyapunov_catalog() {
  static const std::vector<LyapunovSpec> catalog = build_catalog();
  return catalog;
}

const LyapunovSpec& lyapunov_by_id(const std::string& id) {
  for (const LyapunovSpec& spec : lyapunov_catalog()) {
    if (spec.id == id) return spec;
  }
  throw std::invalid_argument("lyapunov_by_id: unknown functional '" + id + "'");
}

std::vector<const LyapunovSpec*> functionals_for(OdeFamily family, SchemeRule rule) {
  std::vector<const LyapunovSpec*> out;
  for (const LyapunovSpec& spec : lyapunov_catalog()) {
    for (const auto& pair : spec.applies_to) {
      if (pair.first == family && pair.second == rule) {
        out.push_back(&spec);
        break;
      }
    }
  }
  return out;
}

double eval_lyapunov(const LyapunovSpec& spec, const Objective& obj, double s,
                     const Trace& trace, long k) {
  if (spec.continuous) {
    throw std::invalid_argument("eval_lyapunov: '" + spec.id +
                                "' is a continuous functional; evaluate it on a flow state");
  }
  if (!(s > 0.0)) throw std::invalid_argument("eval_lyapunov: step size must be positive");
  if (k < 0) throw std::invalid_argument("eval_lyapunov: index must be nonnegative");
  return spec.evaluate(obj, s, trace, k);
}

ContractionReport check_contraction(const LyapunovSpec& spec, const Objective& obj,
                                    const Trace& trace) {
  if (spec.continuous) {
    throw std::invalid_argument("check_contraction: '" + spec.id +
                                "' is a continuous functional; check it along a flow");
  }
  ContractionReport report;
  report.functional_id = spec.id;

  const auto key = std::make_pair(trace.spec.family, trace.spec.rule);
  const bool applies =
      std::find(spec.applies_to.begin(), spec.applies_to.end(), key) != spec.applies_to.end();
  if (!applies) {
    report.reason = "functional is not stated for scheme " + spec_name(trace.spec);
    return report;
  }
  if (spec.needs_strong_convexity && !(obj.mu > 0.0)) {
    report.reason = "objective is not strongly convex";
    return report;
  }
  const double s = trace.spec.step_size;
  if (spec.max_step) {
    const double cap = spec.max_step(obj.mu, obj.lipschitz);
    if (s > cap * (1.0 + 1e-12)) {
      report.reason = "step size exceeds the certified range " + spec.step_condition;
      return report;
    }
  }
  if (!trace.dense()) {
    throw std::invalid_argument("check_contraction: requires a dense trace (record_every = 1)");
  }
  const long last = trace.records.back().k;
  const long last_pair = last - 1 - spec.window;
  if (last_pair < 0) {
    throw std::invalid_argument("check_contraction: trace too short for functional '" + spec.id +
                                "'");
  }
  report.applicable = true;

  const double rate =
      spec.rate ? spec.rate(obj.mu, obj.lipschitz, s) : 0.0;
  for (long k = 0; k <= last_pair; ++k) {
    const double energy_k = spec.evaluate(obj, s, trace, k);
    const double energy_k1 = spec.evaluate(obj, s, trace, k + 1);
    double required = 0.0;  // decrease the inequality demands at this pair
    switch (spec.mode) {
      case ContractionMode::DIFFERENCE_NEXT: required = rate * energy_k1; break;
      case ContractionMode::DIFFERENCE_CURR: required = rate * energy_k; break;
      case ContractionMode::MONOTONE:
        required = spec.surplus ? spec.surplus(obj, s, trace, k) : 0.0;
        break;
    }
    const double slack = 1e-9 * (1.0 + std::abs(energy_k));
    const double excess = (energy_k1 - energy_k) + required - slack;
    ++report.pairs_checked;
    if (excess > 0.0) {
      if (report.first_violation_k < 0) report.first_violation_k = k;
      report.max_violation = std::max(report.max_violation, excess);
    }
  }
  report.pass = report.first_violation_k < 0;
  return report;
}

}  // namespace accelode
