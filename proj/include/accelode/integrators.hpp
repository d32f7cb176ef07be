#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "accelode/schemes.hpp"

namespace accelode {

/// f-gap level past which a run is declared numerically divergent.
inline constexpr double kDivergenceThreshold = 1e12;

/// Newton/fixed-point solve of residual(x) = 0 for the implicit updates.
/// Quadratic objectives never reach this path (their implicit steps are exact
/// linear solves); it serves the genuinely nonlinear problems. With a
/// Jacobian action the solver runs damped Newton: the dense Jacobian is
/// assembled column-by-column from the action (the state dimension is desk
/// scale), and each Newton step is halved until the residual norm decreases.
/// Without one it falls back to damped fixed-point iteration y <- y - eta R(y)
/// with eta halved until the update contracts, which suits residuals that are
/// positive-definite perturbations of the identity. Acceptance:
/// ||residual|| <= tol * (1 + ||guess||).
struct ImplicitSolveResult {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

ImplicitSolveResult solve_implicit(
    const std::function<Vector(const Vector&)>& residual,
    const std::optional<std::function<Vector(const Vector&, const Vector&)>>& jacobian_action,
    const Vector& guess, double tol = 1e-10, int max_iter = 100);

/// Thrown by step() when an implicit solve exhausts its budget; run() folds
/// it into the trace termination instead of propagating.
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), residual_norm(best_residual) {}
  double residual_norm;
};

/// One application of the scheme's update map at iteration k.
///
/// Updates linear in the next velocity (symplectic and classical rules) are
/// solved in closed form; e.g. the symplectic rule reads
///   x_{k+1} = x_k + sqrt(s) v_k
///   v_{k+1} = [v_k - sqrt(s) gd (grad f(x_{k+1}) - grad f(x_k))
///                  - sqrt(s) c grad f(x_{k+1})] / (1 + a).
/// The explicit rule keeps v_k and grad f(x_k) on the right-hand side (the
/// gradient difference still spans x_k -> x_{k+1}); for the time-varying
/// families, whose explicit display divides by k, the k = 0 step falls back
/// to one symplectic update and the explicit rule applies from k = 1 on.
/// The implicit rule advances x with the new velocity and solves
///   (1+a)(y - x_k) - sqrt(s) v_k + s (gd + c) grad f(y) - s gd grad f(x_k) = 0
/// for y = x_{k+1} (exact linear solve on quadratics, Newton otherwise),
/// then recovers v_{k+1} = (y - x_k)/sqrt(s).
/// Classical rules implement gradient descent, NAG-SC, heavy-ball and NAG-C
/// in phase space; the NAG-C update coincides with the symplectic one.
PhaseState step(const SchemeSpec& spec, const Objective& obj, long k, const PhaseState& state);

/// Discrete-iterate record: the time column carries the identification
/// t = t0 + k sqrt(s) (t = k s for first-order gradient descent, whose
/// continuous limit runs on the unscaled clock).
struct TraceRecord {
  long k = 0;
  double t = 0.0;
  PhaseState state;
  double f_gap = 0.0;
  double grad_norm_sq = 0.0;
};

enum class Termination { COMPLETED, DIVERGED, SOLVER_FAILURE };
std::string termination_name(Termination termination);

struct Trace {
  SchemeSpec spec;
  ProblemInstance problem;
  std::vector<TraceRecord> records;
  Termination termination = Termination::COMPLETED;
  long steps_taken = 0;

  /// Record with iterate index k, or null when thinned away / past the end.
  const TraceRecord* record_at(long k) const;
  bool dense() const;  // consecutive k from 0 (record_every = 1)
};

double scheme_time(const SchemeSpec& spec, long k);

/// Applies initial_state then step `iterations` times, recording every
/// record_every-th iterate plus the first and last. Divergence
/// (f-gap > 1e12 or non-finite state) and solver failures terminate the
/// trace early and are reported in `termination`, never thrown.
Trace run(const SchemeSpec& spec, const ProblemInstance& problem, long iterations,
          long record_every = 1);

/// First k with f(x_k) - f* <= target, or -1 when the budget runs out or the
/// run leaves the stable regime.
long iterations_to_reach(const SchemeSpec& spec, const ProblemInstance& problem,
                         double f_gap_target, long max_iterations);

/// The textbook two-sequence/one-sequence formulations, exposed alongside
/// their phase-space counterparts so the iterate-for-iterate equivalences can
/// be tested. Each runner returns the x-iterates x_0 .. x_steps.
std::vector<Vector> run_gradient_descent_sequences(const Objective& obj, const Vector& x0,
                                                   double s, int steps);
std::vector<Vector> run_nag_sc_sequences(const Objective& obj, const Vector& x0, double s,
                                         int steps);
std::vector<Vector> run_nag_c_sequences(const Objective& obj, const Vector& x0, double s,
                                        int steps);
std::vector<Vector> run_heavy_ball_sequences(const Objective& obj, const Vector& x0, double s,
                                             int steps);

struct EquivalencePair {
  std::string name;
  std::function<std::vector<Vector>(const Objective&, const Vector&, double, int)> classical;
  OdeFamily family;  // phase-space counterpart
  SchemeRule rule;
};
std::vector<EquivalencePair> classical_equivalence_pairs();

}  // namespace accelode
