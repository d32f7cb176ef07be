#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace accelode {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A smooth convex objective with first- and second-order oracles and the
/// constants the convergence bounds are stated in: a strong-convexity modulus
/// mu (0 when merely convex) and a gradient Lipschitz constant L. When the
/// minimizer is known (exactly or via a cached numerical solve) it is stored
/// together with the optimal value so traces can report f(x) - f*.
struct Objective {
  int dimension = 0;
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&, const Vector&)> hessian_vector;
  double mu = 0.0;
  double lipschitz = 0.0;
  std::optional<Vector> minimizer;
  std::optional<double> min_value;

  // Set for quadratics only; enables exact direct solves in implicit steps.
  std::optional<Matrix> hessian_matrix;
  std::optional<Vector> linear_term;

  bool quadratic() const { return hessian_matrix.has_value(); }

  double f_gap(const Vector& x) const;         // f(x) - f*, needs min_value
  double grad_norm_sq(const Vector& x) const;  // ||grad f(x)||^2
  double dist_sq(const Vector& x) const;       // ||x - x*||^2, needs minimizer
};

/// An objective together with the start point every bound is measured from.
struct ProblemInstance {
  Objective objective;
  Vector x0;
  std::string label;

  double d0_sq() const { return objective.dist_sq(x0); }    // ||x0 - x*||^2
  double f0_gap() const { return objective.f_gap(x0); }     // f(x0) - f*
};

/// f(x) = 1/2 x^T A x - b^T x with A = Q diag(lambda) Q^T, eigenvalues
/// linearly spaced over [mu, lipschitz] (both endpoints hit when dim >= 2;
/// dim = 1 uses lipschitz), and Q a seeded random orthogonal basis. For
/// dim = 1 the linear term is dropped (b = 0), giving the scalar f = L/2 x^2.
/// The minimizer A^{-1} b and its value are stored exactly.
Objective make_quadratic(int dim, double mu, double lipschitz, std::uint64_t seed);

/// Regularized logistic regression on seeded synthetic data:
///   f(x) = (1/n) sum_i log(1 + exp(-y_i z_i^T x)) + (reg/2) ||x||^2.
/// Generator: rows z_i are gaussian draws scaled by 1/sqrt(dim), labels y_i
/// are uniform signs; R = max_i ||z_i||, mu = reg, L = R^2/4 + reg. The
/// minimizer is found once by gradient descent (step 1/L) to
/// ||grad f|| <= 1e-12 and cached.
struct LogisticData {
  Matrix z;   // n x dim rows
  Vector y;   // labels in {-1, +1}
  double reg;
};
LogisticData make_logistic_data(int num_samples, int dim, double reg, std::uint64_t seed);
Objective make_logistic_from_data(const LogisticData& data);
Objective make_logistic(int num_samples, int dim, double reg, std::uint64_t seed);

/// Soft-max of affine pieces, a merely convex (mu = 0) objective:
///   f(x) = rho * log sum_i exp((a_i^T x - b_i) / rho)
/// over dim+1 pieces. Generator: gaussian rows recentered so the a_i sum to
/// zero (this puts 0 in the interior of their convex hull, so a minimizer
/// exists), b_i gaussian. L = max_i ||a_i||^2 / rho. Evaluation shifts by the
/// max exponent so large arguments cannot overflow. The minimizer is found
/// numerically as for the logistic objective.
struct LogSumExpData {
  Matrix a;   // (dim+1) x dim rows, except in degenerate hand-built cases
  Vector b;
  double sharpness;
};
LogSumExpData make_log_sum_exp_data(int dim, double sharpness, std::uint64_t seed);
Objective make_log_sum_exp_from_data(const LogSumExpData& data);
Objective make_log_sum_exp(int dim, double sharpness, std::uint64_t seed);

/// Central-difference validation of the gradient and the Hessian action.
/// Step h = cbrt(machine epsilon) * (1 + ||x||); the per-component error is
/// measured relative to 1 + |component| so near-zero gradients do not inflate
/// the ratio. The Hessian action is compared against differenced gradients
/// along one seeded random unit direction.
struct GradientCheckReport {
  bool pass = false;
  double max_rel_error = 0.0;  // worst gradient component mismatch
  double hv_rel_error = 0.0;   // worst Hessian-action component mismatch
};
GradientCheckReport gradient_check(const Objective& obj, const Vector& x, double tol);

/// Directional finite-difference Hessian action for objectives supplied
/// without an analytic one: (grad f(x + h d) - grad f(x - h d)) / (2h).
Vector finite_difference_hessian_vector(const std::function<Vector(const Vector&)>& gradient,
                                        const Vector& x, const Vector& d);

/// Canonical desk-scale instances shared by the verification suites. The
/// start point is x* + u for a seeded random unit vector u, so
/// ||x0 - x*||^2 = 1 for every instance.
ProblemInstance make_instance(Objective obj, const std::string& label, std::uint64_t x0_seed);
ProblemInstance canonical_quadratic(double mu, double lipschitz);
ProblemInstance canonical_logistic();
ProblemInstance canonical_log_sum_exp();

}  // namespace accelode
