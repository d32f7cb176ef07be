#include "accelode/reference_flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace accelode {

namespace {

PhaseState axpy(const PhaseState& base, double c, const PhaseState& dir) {
  return PhaseState{base.x + c * dir.x, base.v + c * dir.v};
}

// Classical 4th-order Runge-Kutta step of size h at time t. Empty when a
// stage overflows (the field guards against non-finite inputs, so a blowing
// trajectory must be caught between stages).
std::optional<PhaseState> rk4_step(OdeFamily family, const Objective& obj, double s, double t,
                                   const PhaseState& y, double h) {
  const PhaseState k1 = vector_field(family, obj, s, t, y);
  const PhaseState y2 = axpy(y, 0.5 * h, k1);
  if (!k1.finite() || !y2.finite()) return std::nullopt;
  const PhaseState k2 = vector_field(family, obj, s, t + 0.5 * h, y2);
  const PhaseState y3 = axpy(y, 0.5 * h, k2);
  if (!k2.finite() || !y3.finite()) return std::nullopt;
  const PhaseState k3 = vector_field(family, obj, s, t + 0.5 * h, y3);
  const PhaseState y4 = axpy(y, h, k3);
  if (!k3.finite() || !y4.finite()) return std::nullopt;
  const PhaseState k4 = vector_field(family, obj, s, t + h, y4);
  if (!k4.finite()) return std::nullopt;
  PhaseState out = y;
  out.x += (h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  out.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  return out;
}

FlowSample make_sample(const Objective& obj, double t, const PhaseState& state) {
  FlowSample sample;
  sample.t = t;
  sample.state = state;
  sample.f_gap = obj.f_gap(state.x);
  sample.grad_norm_sq = obj.grad_norm_sq(state.x);
  return sample;
}

}  // namespace

Vector FlowTrace::position_at(double t) const {
  if (samples.empty()) throw std::invalid_argument("position_at: flow has no samples");
  const double lo = samples.front().t;
  const double hi = samples.back().t;
  const double pad = 1e-9 * (1.0 + std::abs(hi));
  if (t < lo - pad || t > hi + pad) {
    throw std::invalid_argument("position_at: time outside the sampled range");
  }
  const double clamped = std::min(std::max(t, lo), hi);
  if (samples.size() == 1) return samples.front().state.x;
  // Fixed-step sampling: locate the bracketing pair directly.
  std::size_t i = 0;
  if (integrator_step > 0.0) {
    const double offset = (clamped - lo) / integrator_step;
    i = static_cast<std::size_t>(std::max(0.0, std::floor(offset)));
  }
  if (i + 1 >= samples.size()) i = samples.size() - 2;
  while (i + 2 < samples.size() && samples[i + 1].t < clamped) ++i;
  while (i > 0 && samples[i].t > clamped) --i;
  const FlowSample& a = samples[i];
  const FlowSample& b = samples[i + 1];
  const double span = b.t - a.t;
  const double alpha = span > 0.0 ? (clamped - a.t) / span : 0.0;
  return (1.0 - alpha) * a.state.x + alpha * b.state.x;
}

FlowTrace integrate(OdeFamily family, const ProblemInstance& problem, double s, double horizon,
                    double h) {
  if (s <= 0.0) throw std::invalid_argument("integrate: s must be positive");
  if (h <= 0.0) throw std::invalid_argument("integrate: step h must be positive");
  const Objective& obj = problem.objective;
  if (obj.lipschitz <= 0.0) throw std::invalid_argument("integrate: objective needs L > 0");
  const double cap = std::min(1.0 / (10.0 * obj.lipschitz), std::sqrt(s) / 10.0);
  if (h > cap * (1.0 + 1e-12)) {
    throw std::invalid_argument("integrate: step h exceeds min(1/(10 L), sqrt(s)/10)");
  }

  FlowTrace flow;
  flow.family = family;
  flow.s = s;
  flow.integrator_step = h;
  // LOW_C's damping 3/t has its origin at t = 0; start a hair later with the
  // same state (v stays 0) and record the offset.
  const InitialCondition init = initial_state(family, obj, problem.x0, s);
  flow.start_time = family == OdeFamily::LOW_C ? 1e-3 : init.t0;
  if (horizon <= flow.start_time) {
    throw std::invalid_argument("integrate: horizon must lie past the flow's start time");
  }

  const long steps = static_cast<long>(std::ceil((horizon - flow.start_time) / h - 1e-9));
  PhaseState state = init.state;
  flow.samples.push_back(make_sample(obj, flow.start_time, state));
  for (long i = 0; i < steps; ++i) {
    const double t = flow.start_time + static_cast<double>(i) * h;
    const std::optional<PhaseState> next = rk4_step(family, obj, s, t, state, h);
    if (!next || !next->finite()) {
      flow.diverged = true;
      break;
    }
    state = *next;
    flow.samples.push_back(make_sample(obj, t + h, state));
  }
  return flow;
}

std::vector<GapSample> discretization_gap(const FlowTrace& flow, const Trace& trace) {
  if (flow.samples.empty()) throw std::invalid_argument("discretization_gap: empty flow");
  if (trace.records.empty()) throw std::invalid_argument("discretization_gap: empty trace");
  const double coverage = flow.samples.back().t;
  const double pad = 1e-9 * (1.0 + std::abs(coverage));
  const bool truncated =
      flow.diverged || trace.termination != Termination::COMPLETED;
  std::vector<GapSample> gaps;
  gaps.reserve(trace.records.size());
  for (const TraceRecord& record : trace.records) {
    // Iterate times before the flow's start (the LOW_C offset) share the
    // initial state, so compare against the first sample.
    const double t = std::max(record.t, flow.start_time);
    if (t > coverage + pad) {
      if (truncated) break;  // compare as far as both sides reach
      throw std::invalid_argument(
          "discretization_gap: flow horizon does not cover the trace");
    }
    gaps.push_back(GapSample{record.k, (record.state.x - flow.position_at(t)).norm()});
  }
  return gaps;
}

FlowMonotoneReport check_flow_monotone(const LyapunovSpec& spec, const Objective& obj,
                                       const FlowTrace& flow, double slack) {
  if (!spec.continuous) {
    throw std::invalid_argument("check_flow_monotone: " + spec.id +
                                " is a discrete-time functional");
  }
  FlowMonotoneReport report;
  report.functional_id = spec.id;
  if (spec.flow_family != flow.family) {
    report.reason = "functional is stated for the " + family_name(spec.flow_family) + " flow";
    return report;
  }
  if (spec.needs_strong_convexity && obj.mu <= 0.0) {
    report.reason = "objective is not strongly convex";
    return report;
  }
  if (flow.samples.size() < 2) {
    throw std::invalid_argument("check_flow_monotone: flow needs at least two samples");
  }
  report.applicable = true;
  double prev = spec.evaluate_flow(obj, flow.samples.front().t, flow.samples.front().state);
  for (std::size_t i = 1; i < flow.samples.size(); ++i) {
    const FlowSample& sample = flow.samples[i];
    const double value = spec.evaluate_flow(obj, sample.t, sample.state);
    const double rise = value - prev;
    if (rise > slack) {
      if (report.first_violation_index < 0) {
        report.first_violation_index = static_cast<long>(i) - 1;
        report.first_violation_t = flow.samples[i - 1].t;
      }
      report.max_increase = std::max(report.max_increase, rise);
    }
    ++report.pairs_checked;
    prev = value;
  }
  report.pass = report.first_violation_index < 0;
  return report;
}

}  // namespace accelode
