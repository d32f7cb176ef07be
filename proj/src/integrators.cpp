#include "accelode/integrators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace accelode {

namespace {

double residual_tolerance(double tol, const Vector& guess) { return tol * (1.0 + guess.norm()); }

// Dense Jacobian assembled from its action on basis vectors; the phase-state
// dimension is small enough that this beats a matrix-free Krylov loop.
Matrix assemble_jacobian(const std::function<Vector(const Vector&, const Vector&)>& action,
                         const Vector& y) {
  const int n = static_cast<int>(y.size());
  Matrix jac(n, n);
  Vector basis = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    basis(j) = 1.0;
    jac.col(j) = action(y, basis);
    basis(j) = 0.0;
  }
  return jac;
}

}  // namespace

ImplicitSolveResult solve_implicit(
    const std::function<Vector(const Vector&)>& residual,
    const std::optional<std::function<Vector(const Vector&, const Vector&)>>& jacobian_action,
    const Vector& guess, double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("solve_implicit: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solve_implicit: max_iter must be at least 1");
  if (!guess.allFinite()) throw std::invalid_argument("solve_implicit: guess must be finite");

  const double accept = residual_tolerance(tol, guess);
  Vector y = guess;
  Vector r = residual(y);
  double r_norm = r.norm();

  ImplicitSolveResult result;
  result.x = y;
  result.residual_norm = r_norm;

  double eta = 1.0;  // fixed-point damping, remembered across iterations
  for (int iter = 0; iter < max_iter; ++iter) {
    if (!std::isfinite(r_norm)) break;
    if (r_norm <= accept) {
      result.converged = true;
      break;
    }
    result.iterations = iter + 1;

    Vector direction;
    if (jacobian_action) {
      const Matrix jac = assemble_jacobian(*jacobian_action, y);
      direction = jac.partialPivLu().solve(r);
    } else {
      direction = eta * r;
    }

    // Backtrack until the residual norm decreases; a step that cannot be made
    // to decrease even at tiny damping means the iteration has stalled.
    bool improved = false;
    double alpha = 1.0;
    for (int halving = 0; halving < 60; ++halving) {
      const Vector candidate = y - alpha * direction;
      const Vector r_candidate = residual(candidate);
      const double candidate_norm = r_candidate.norm();
      if (std::isfinite(candidate_norm) && candidate_norm < r_norm) {
        y = candidate;
        r = r_candidate;
        r_norm = candidate_norm;
        if (!jacobian_action) eta *= alpha;  // keep the damping that worked
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;

    result.x = y;
    result.residual_norm = r_norm;
  }
  if (!result.converged && result.residual_norm <= accept && std::isfinite(result.residual_norm)) {
    result.converged = true;  // budget ended exactly on an acceptable iterate
  }
  result.x = y;
  result.residual_norm = r_norm;
  return result;
}

namespace {

// Shared implicit update: solve
//   (1+a)(y - x) - sqrt(s) v + s (gd + c) grad f(y) - s gd grad f(x) = 0.
// On quadratics f = x'Ax/2 - b'x this is one SPD linear solve; otherwise
// Newton with the exact Jacobian action (1+a) d + s (gd + c) H(y) d.
Vector implicit_position(const Objective& obj, const UpdateCoefficients& co, double s,
                         const Vector& x, const Vector& v) {
  const double sqrt_s = std::sqrt(s);
  const double one_plus_a = 1.0 + co.a;
  const double total = s * (co.gd + co.c);

  if (obj.quadratic()) {
    const Matrix& hess = *obj.hessian_matrix;
    const Vector& lin = *obj.linear_term;
    const int n = static_cast<int>(x.size());
    const Matrix system = one_plus_a * Matrix::Identity(n, n) + total * hess;
    const Vector rhs =
        one_plus_a * x + sqrt_s * v + total * lin + s * co.gd * (hess * x - lin);
    return system.ldlt().solve(rhs);
  }

  const Vector grad_x = obj.gradient(x);
  auto residual = [&](const Vector& y) -> Vector {
    return one_plus_a * (y - x) - sqrt_s * v + total * obj.gradient(y) - s * co.gd * grad_x;
  };
  auto jacobian_action = [&](const Vector& y, const Vector& d) -> Vector {
    return one_plus_a * d + total * obj.hessian_vector(y, d);
  };
  const ImplicitSolveResult solve =
      solve_implicit(residual, jacobian_action, x, 1e-10, 100);
  if (!solve.converged) {
    throw SolverFailure("implicit update failed to converge (residual " +
                            std::to_string(solve.residual_norm) + ")",
                        solve.residual_norm);
  }
  return solve.x;
}

PhaseState step_grad_flow(const SchemeRule rule, const Objective& obj, double s,
                          const PhaseState& state) {
  PhaseState next;
  next.v = Vector::Zero(state.x.size());
  if (rule == SchemeRule::IMPLICIT) {
    if (obj.quadratic()) {
      const Matrix& hess = *obj.hessian_matrix;
      const Vector& lin = *obj.linear_term;
      const int n = static_cast<int>(state.x.size());
      const Matrix system = Matrix::Identity(n, n) + s * hess;
      next.x = system.ldlt().solve(state.x + s * lin);
    } else {
      auto residual = [&](const Vector& y) -> Vector {
        return y - state.x + s * obj.gradient(y);
      };
      auto jacobian_action = [&](const Vector& y, const Vector& d) -> Vector {
        return d + s * obj.hessian_vector(y, d);
      };
      const ImplicitSolveResult solve =
          solve_implicit(residual, jacobian_action, state.x, 1e-10, 100);
      if (!solve.converged) {
        throw SolverFailure("implicit gradient step failed to converge (residual " +
                                std::to_string(solve.residual_norm) + ")",
                            solve.residual_norm);
      }
      next.x = solve.x;
    }
  } else {  // EXPLICIT and CLASSICAL coincide: plain gradient descent
    next.x = state.x - s * obj.gradient(state.x);
  }
  return next;
}

}  // namespace

PhaseState step(const SchemeSpec& spec, const Objective& obj, long k, const PhaseState& state) {
  require_admissible(spec);
  if (k < 0) throw std::invalid_argument("step: iteration index must be nonnegative");
  if (!state.finite()) throw std::invalid_argument("step: state must be finite");
  if (state.x.size() != obj.dimension || state.v.size() != obj.dimension) {
    throw std::invalid_argument("step: state dimension does not match the objective");
  }
  if (requires_strong_convexity(spec.family) && obj.mu <= 0.0) {
    throw std::invalid_argument("step: family needs a strictly positive mu");
  }

  const double s = spec.step_size;
  if (spec.family == OdeFamily::GRAD_FLOW) return step_grad_flow(spec.rule, obj, s, state);

  const double sqrt_s = std::sqrt(s);
  SchemeRule rule = spec.rule;
  // The explicit displays of the time-varying families divide by k; their
  // first step is taken with the symplectic update instead.
  if (rule == SchemeRule::EXPLICIT && time_varying(spec.family) && k == 0) {
    rule = SchemeRule::SYMPLECTIC;
  }

  if (rule == SchemeRule::CLASSICAL) {
    if (spec.family == OdeFamily::C_HR_MOD) {
      rule = SchemeRule::SYMPLECTIC;  // NAG-C's phase form is the symplectic update
    } else {
      // Momentum-solved forms of NAG-SC and heavy-ball.
      const double sqrt_mu_s = std::sqrt(obj.mu * s);
      const double beta = (1.0 - sqrt_mu_s) / (1.0 + sqrt_mu_s);
      PhaseState next;
      next.x = state.x + sqrt_s * state.v;
      const Vector grad_next = obj.gradient(next.x);
      if (spec.family == OdeFamily::SC_HR) {
        const Vector grad_curr = obj.gradient(state.x);
        next.v = beta * (state.v - sqrt_s * (grad_next - grad_curr)) - sqrt_s * grad_next;
      } else {  // HB_HR
        next.v = beta * state.v - sqrt_s * grad_next;
      }
      return next;
    }
  }

  const UpdateCoefficients co = update_coefficients(spec.family, rule, obj.mu, s, k);

  if (rule == SchemeRule::SYMPLECTIC) {
    PhaseState next;
    next.x = state.x + sqrt_s * state.v;
    const Vector grad_next = obj.gradient(next.x);
    Vector rhs = state.v - sqrt_s * co.c * grad_next;
    if (co.gd != 0.0) rhs -= sqrt_s * co.gd * (grad_next - obj.gradient(state.x));
    next.v = rhs / (1.0 + co.a);
    return next;
  }

  if (rule == SchemeRule::EXPLICIT) {
    PhaseState next;
    next.x = state.x + sqrt_s * state.v;
    const Vector grad_curr = obj.gradient(state.x);
    next.v = (1.0 - co.a) * state.v - sqrt_s * co.c * grad_curr;
    if (co.gd != 0.0) next.v -= sqrt_s * co.gd * (obj.gradient(next.x) - grad_curr);
    return next;
  }

  // IMPLICIT: both updates use the new iterates.
  PhaseState next;
  next.x = implicit_position(obj, co, s, state.x, state.v);
  next.v = (next.x - state.x) / sqrt_s;
  return next;
}

std::string termination_name(Termination termination) {
  switch (termination) {
    case Termination::COMPLETED: return "completed";
    case Termination::DIVERGED: return "diverged";
    case Termination::SOLVER_FAILURE: return "solver-failure";
  }
  throw std::invalid_argument("termination_name: unknown termination");
}

const TraceRecord* Trace::record_at(long k) const {
  for (const TraceRecord& record : records) {
    if (record.k == k) return &record;
  }
  return nullptr;
}

bool Trace::dense() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].k != static_cast<long>(i)) return false;
  }
  return !records.empty();
}

double scheme_time(const SchemeSpec& spec, long k) {
  if (spec.family == OdeFamily::GRAD_FLOW) return static_cast<double>(k) * spec.step_size;
  return time_origin(spec.family, spec.step_size) +
         static_cast<double>(k) * std::sqrt(spec.step_size);
}

namespace {

TraceRecord make_record(const SchemeSpec& spec, const Objective& obj, long k,
                        const PhaseState& state) {
  TraceRecord record;
  record.k = k;
  record.t = scheme_time(spec, k);
  record.state = state;
  record.f_gap = obj.f_gap(state.x);
  record.grad_norm_sq = obj.grad_norm_sq(state.x);
  return record;
}

bool divergent(const PhaseState& state, double f_gap) {
  return !state.finite() || !(f_gap <= kDivergenceThreshold);
}

}  // namespace

Trace run(const SchemeSpec& spec, const ProblemInstance& problem, long iterations,
          long record_every) {
  require_admissible(spec);
  if (iterations < 0) throw std::invalid_argument("run: iterations must be nonnegative");
  if (record_every < 1) throw std::invalid_argument("run: record_every must be at least 1");

  const Objective& obj = problem.objective;
  Trace trace;
  trace.spec = spec;
  trace.problem = problem;

  PhaseState state = initial_state(spec.family, obj, problem.x0, spec.step_size).state;
  TraceRecord record = make_record(spec, obj, 0, state);
  trace.records.push_back(record);
  if (divergent(state, record.f_gap)) {
    trace.termination = Termination::DIVERGED;
    return trace;
  }

  for (long k = 0; k < iterations; ++k) {
    try {
      state = step(spec, obj, k, state);
    } catch (const SolverFailure&) {
      trace.termination = Termination::SOLVER_FAILURE;
      return trace;
    }
    trace.steps_taken = k + 1;

    const long next_k = k + 1;
    const double f_gap = state.finite() ? obj.f_gap(state.x)
                                        : std::numeric_limits<double>::quiet_NaN();
    if (divergent(state, f_gap)) {
      TraceRecord last;
      last.k = next_k;
      last.t = scheme_time(spec, next_k);
      last.state = state;
      last.f_gap = f_gap;
      last.grad_norm_sq = std::numeric_limits<double>::quiet_NaN();
      if (state.finite()) {
        last.f_gap = f_gap;
        last.grad_norm_sq = obj.grad_norm_sq(state.x);
      }
      trace.records.push_back(last);
      trace.termination = Termination::DIVERGED;
      return trace;
    }
    if (next_k % record_every == 0 || next_k == iterations) {
      trace.records.push_back(make_record(spec, obj, next_k, state));
    }
  }
  trace.termination = Termination::COMPLETED;
  return trace;
}

long iterations_to_reach(const SchemeSpec& spec, const ProblemInstance& problem,
                         double f_gap_target, long max_iterations) {
  require_admissible(spec);
  if (max_iterations < 0) throw std::invalid_argument("iterations_to_reach: negative budget");
  const Objective& obj = problem.objective;

  PhaseState state = initial_state(spec.family, obj, problem.x0, spec.step_size).state;
  if (obj.f_gap(state.x) <= f_gap_target) return 0;
  for (long k = 0; k < max_iterations; ++k) {
    try {
      state = step(spec, obj, k, state);
    } catch (const SolverFailure&) {
      return -1;
    }
    if (!state.finite()) return -1;
    const double f_gap = obj.f_gap(state.x);
    if (f_gap <= f_gap_target) return k + 1;
    if (!(f_gap <= kDivergenceThreshold)) return -1;
  }
  return -1;
}

std::vector<Vector> run_gradient_descent_sequences(const Objective& obj, const Vector& x0,
                                                   double s, int steps) {
  std::vector<Vector> xs;
  xs.reserve(steps + 1);
  xs.push_back(x0);
  for (int k = 0; k < steps; ++k) xs.push_back(xs.back() - s * obj.gradient(xs.back()));
  return xs;
}

std::vector<Vector> run_nag_sc_sequences(const Objective& obj, const Vector& x0, double s,
                                         int steps) {
  if (obj.mu <= 0.0) throw std::invalid_argument("run_nag_sc_sequences: mu must be positive");
  const double sqrt_mu_s = std::sqrt(obj.mu * s);
  const double beta = (1.0 - sqrt_mu_s) / (1.0 + sqrt_mu_s);
  std::vector<Vector> xs;
  xs.reserve(steps + 1);
  xs.push_back(x0);
  Vector y = x0;  // y_0 = x_0
  for (int k = 0; k < steps; ++k) {
    const Vector y_next = xs.back() - s * obj.gradient(xs.back());
    xs.push_back(y_next + beta * (y_next - y));
    y = y_next;
  }
  return xs;
}

std::vector<Vector> run_nag_c_sequences(const Objective& obj, const Vector& x0, double s,
                                        int steps) {
  std::vector<Vector> xs;
  xs.reserve(steps + 1);
  xs.push_back(x0);
  Vector y = x0;  // y_0 = x_0
  for (int k = 0; k < steps; ++k) {
    const Vector y_next = xs.back() - s * obj.gradient(xs.back());
    const double momentum = static_cast<double>(k) / static_cast<double>(k + 3);
    xs.push_back(y_next + momentum * (y_next - y));
    y = y_next;
  }
  return xs;
}

std::vector<Vector> run_heavy_ball_sequences(const Objective& obj, const Vector& x0, double s,
                                             int steps) {
  if (obj.mu <= 0.0) throw std::invalid_argument("run_heavy_ball_sequences: mu must be positive");
  const double sqrt_mu_s = std::sqrt(obj.mu * s);
  const double alpha = (1.0 - sqrt_mu_s) / (1.0 + sqrt_mu_s);
  std::vector<Vector> xs;
  xs.reserve(steps + 1);
  xs.push_back(x0);
  // Warm start x_{-1} = x_0 + s grad f(x_0) makes the first step match the
  // phase-space initial velocity.
  Vector x_prev = x0 + s * obj.gradient(x0);
  for (int k = 0; k < steps; ++k) {
    const Vector& x_curr = xs.back();
    const Vector x_next = x_curr - s * obj.gradient(x_curr) + alpha * (x_curr - x_prev);
    x_prev = x_curr;
    xs.push_back(x_next);
  }
  return xs;
}

std::vector<EquivalencePair> classical_equivalence_pairs() {
  return {
      {"gradient-descent", run_gradient_descent_sequences, OdeFamily::GRAD_FLOW,
       SchemeRule::CLASSICAL},
      {"nag-sc", run_nag_sc_sequences, OdeFamily::SC_HR, SchemeRule::CLASSICAL},
      {"nag-c", run_nag_c_sequences, OdeFamily::C_HR_MOD, SchemeRule::SYMPLECTIC},
      {"heavy-ball", run_heavy_ball_sequences, OdeFamily::HB_HR, SchemeRule::CLASSICAL},
  };
}

}  // namespace accelode
