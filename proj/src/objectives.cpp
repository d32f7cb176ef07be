#include "accelode/objectives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "accelode/rng.hpp"

namespace accelode {

double Objective::f_gap(const Vector& x) const {
  if (!min_value) throw std::logic_error("f_gap: objective has no stored optimal value");
  // Quadratics admit the cancellation-free form (x - x*)^T A (x - x*) / 2;
  // the generic difference loses ~ulp(|f*|) absolutely, which k^2-weighted
  // energies would amplify past their rounding slack.
  if (hessian_matrix && minimizer) {
    const Vector d = x - *minimizer;
    return 0.5 * d.dot(*hessian_matrix * d);
  }
  return evaluate(x) - *min_value;
}

double Objective::grad_norm_sq(const Vector& x) const { return gradient(x).squaredNorm(); }

double Objective::dist_sq(const Vector& x) const {
  if (!minimizer) throw std::logic_error("dist_sq: objective has no stored minimizer");
  return (x - *minimizer).squaredNorm();
}

namespace {

// Seeded random orthogonal matrix: QR of a gaussian matrix with column signs
// fixed so the factorization is unambiguous.
Matrix random_orthogonal(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

// Gradient descent at step 1/L from x = 0 until ||grad f|| <= tol; used to
// cache minimizers of the non-quadratic objectives.
Vector minimize_by_gradient_descent(const Objective& obj, double tol, long max_iter) {
  Vector x = Vector::Zero(obj.dimension);
  const double step = 1.0 / obj.lipschitz;
  for (long it = 0; it < max_iter; ++it) {
    Vector g = obj.gradient(x);
    if (!g.allFinite()) throw std::runtime_error("minimizer search: gradient is not finite");
    if (g.norm() <= tol) return x;
    x -= step * g;
  }
  throw std::runtime_error("minimizer search did not reach tolerance within the iteration budget");
}

double logistic_loss(double u) {
  // log(1 + exp(-u)) without overflow for large |u|.
  if (u >= 0.0) return std::log1p(std::exp(-u));
  return -u + std::log1p(std::exp(u));
}

double logistic_sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

}  // namespace

Objective make_quadratic(int dim, double mu, double lipschitz, std::uint64_t seed) {
  if (dim <= 0) throw std::invalid_argument("make_quadratic: dimension must be positive");
  if (mu <= 0.0) throw std::invalid_argument("make_quadratic: mu must be positive");
  if (mu > lipschitz) throw std::invalid_argument("make_quadratic: mu must not exceed the Lipschitz constant");

  Vector eigenvalues(dim);
  if (dim == 1) {
    eigenvalues(0) = lipschitz;
  } else {
    for (int i = 0; i < dim; ++i)
      eigenvalues(i) = mu + (lipschitz - mu) * static_cast<double>(i) / static_cast<double>(dim - 1);
  }

  Matrix q = random_orthogonal(dim, seed);
  Matrix a = q * eigenvalues.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose());  // remove rounding asymmetry

  Vector b;
  if (dim == 1) {
    b = Vector::Zero(1);
  } else {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);  // decorrelate from the basis draw
    b = rng.gaussian_vector(dim);
  }

  Objective obj;
  obj.dimension = dim;
  obj.mu = mu;
  obj.lipschitz = lipschitz;
  obj.evaluate = [a, b](const Vector& x) { return 0.5 * x.dot(a * x) - b.dot(x); };
  obj.gradient = [a, b](const Vector& x) { return Vector(a * x - b); };
  obj.hessian_vector = [a](const Vector&, const Vector& d) { return Vector(a * d); };
  obj.hessian_matrix = a;
  obj.linear_term = b;
  Vector xstar = a.ldlt().solve(b);
  obj.minimizer = xstar;
  obj.min_value = obj.evaluate(xstar);
  return obj;
}

LogisticData make_logistic_data(int num_samples, int dim, double reg, std::uint64_t seed) {
  if (num_samples <= 0) throw std::invalid_argument("make_logistic_data: need at least one sample");
  if (dim <= 0) throw std::invalid_argument("make_logistic_data: dimension must be positive");
  if (reg <= 0.0) throw std::invalid_argument("make_logistic_data: regularization must be positive");
  Rng rng(seed);
  LogisticData data;
  data.reg = reg;
  data.z.resize(num_samples, dim);
  data.y.resize(num_samples);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < num_samples; ++i) {
    for (int j = 0; j < dim; ++j) data.z(i, j) = scale * rng.gaussian();
    data.y(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  return data;
}

Objective make_logistic_from_data(const LogisticData& data) {
  if (data.reg <= 0.0) throw std::invalid_argument("make_logistic_from_data: regularization must be positive");
  const Matrix z = data.z;
  const Vector y = data.y;
  const double reg = data.reg;
  const int n = static_cast<int>(z.rows());
  const int dim = static_cast<int>(z.cols());
  const double r_max = z.rowwise().norm().maxCoeff();

  Objective obj;
  obj.dimension = dim;
  obj.mu = reg;
  obj.lipschitz = r_max * r_max / 4.0 + reg;
  obj.evaluate = [z, y, reg, n](const Vector& x) {
    double total = 0.0;
    Vector margins = z * x;
    for (int i = 0; i < n; ++i) total += logistic_loss(y(i) * margins(i));
    return total / n + 0.5 * reg * x.squaredNorm();
  };
  obj.gradient = [z, y, reg, n](const Vector& x) {
    Vector margins = z * x;
    Vector weights(n);
    for (int i = 0; i < n; ++i) weights(i) = -y(i) * logistic_sigmoid(-y(i) * margins(i));
    return Vector(z.transpose() * weights / n + reg * x);
  };
  obj.hessian_vector = [z, y, reg, n](const Vector& x, const Vector& d) {
    Vector margins = z * x;
    Vector zd = z * d;
    Vector weights(n);
    for (int i = 0; i < n; ++i) {
      const double p = logistic_sigmoid(y(i) * margins(i));
      weights(i) = p * (1.0 - p) * zd(i);
    }
    return Vector(z.transpose() * weights / n + reg * d);
  };
  Vector xstar = minimize_by_gradient_descent(obj, 1e-12, 10000000L);
  obj.minimizer = xstar;
  obj.min_value = obj.evaluate(xstar);
  return obj;
}

Objective make_logistic(int num_samples, int dim, double reg, std::uint64_t seed) {
  return make_logistic_from_data(make_logistic_data(num_samples, dim, reg, seed));
}

LogSumExpData make_log_sum_exp_data(int dim, double sharpness, std::uint64_t seed) {
  if (dim <= 0) throw std::invalid_argument("make_log_sum_exp_data: dimension must be positive");
  if (sharpness <= 0.0) throw std::invalid_argument("make_log_sum_exp_data: sharpness must be positive");
  Rng rng(seed);
  const int pieces = dim + 1;
  LogSumExpData data;
  data.sharpness = sharpness;
  data.a.resize(pieces, dim);
  data.b.resize(pieces);
  for (int i = 0; i < pieces; ++i)
    for (int j = 0; j < dim; ++j) data.a(i, j) = rng.gaussian();
  Eigen::RowVectorXd mean = data.a.colwise().mean();
  data.a.rowwise() -= mean;  // sum of rows = 0 so a minimizer exists
  for (int i = 0; i < pieces; ++i) data.b(i) = rng.gaussian();
  return data;
}

Objective make_log_sum_exp_from_data(const LogSumExpData& data) {
  if (data.sharpness <= 0.0) throw std::invalid_argument("make_log_sum_exp_from_data: sharpness must be positive");
  const Matrix a = data.a;
  const Vector b = data.b;
  const double rho = data.sharpness;
  const int pieces = static_cast<int>(a.rows());
  const int dim = static_cast<int>(a.cols());

  // Shifted soft-max weights p_i = exp(u_i - max u) / sum --- overflow-safe.
  auto weights_at = [a, b, rho, pieces](const Vector& x) {
    Vector u = (a * x - b) / rho;
    const double shift = u.maxCoeff();
    Vector p(pieces);
    for (int i = 0; i < pieces; ++i) p(i) = std::exp(u(i) - shift);
    const double total = p.sum();
    return std::pair<Vector, double>(p / total, shift + std::log(total));
  };

  Objective obj;
  obj.dimension = dim;
  obj.mu = 0.0;
  obj.lipschitz = a.rowwise().squaredNorm().maxCoeff() / rho;
  obj.evaluate = [weights_at, rho](const Vector& x) {
    const double value = rho * weights_at(x).second;
    if (!std::isfinite(value)) throw std::runtime_error("log-sum-exp evaluation produced a non-finite value");
    return value;
  };
  obj.gradient = [weights_at, a](const Vector& x) {
    return Vector(a.transpose() * weights_at(x).first);
  };
  obj.hessian_vector = [weights_at, a, rho](const Vector& x, const Vector& d) {
    Vector p = weights_at(x).first;
    Vector ad = a * d;
    Vector g = a.transpose() * p;
    return Vector((a.transpose() * (p.cwiseProduct(ad)) - g * p.dot(ad)) / rho);
  };
  if (obj.lipschitz > 0.0) {
    Vector xstar = minimize_by_gradient_descent(obj, 1e-12, 10000000L);
    obj.minimizer = xstar;
    obj.min_value = obj.evaluate(xstar);
  } else {
    // Degenerate constant objective (all-zero pieces): any point is optimal.
    obj.minimizer = Vector::Zero(dim);
    obj.min_value = obj.evaluate(Vector::Zero(dim));
  }
  return obj;
}

Objective make_log_sum_exp(int dim, double sharpness, std::uint64_t seed) {
  return make_log_sum_exp_from_data(make_log_sum_exp_data(dim, sharpness, seed));
}

Vector finite_difference_hessian_vector(const std::function<Vector(const Vector&)>& gradient,
                                        const Vector& x, const Vector& d) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
  return (gradient(x + h * d) - gradient(x - h * d)) / (2.0 * h);
}

GradientCheckReport gradient_check(const Objective& obj, const Vector& x, double tol) {
  GradientCheckReport report;
  if (!x.allFinite()) throw std::invalid_argument("gradient_check: point must be finite");
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());

  Vector g = obj.gradient(x);
  for (int j = 0; j < obj.dimension; ++j) {
    Vector e = Vector::Zero(obj.dimension);
    e(j) = h;
    const double fd = (obj.evaluate(x + e) - obj.evaluate(x - e)) / (2.0 * h);
    const double rel = std::abs(fd - g(j)) / (1.0 + std::abs(g(j)));
    report.max_rel_error = std::max(report.max_rel_error, rel);
  }

  Rng rng(1234);
  Vector d = rng.unit_vector(obj.dimension);
  Vector hv = obj.hessian_vector(x, d);
  Vector hv_fd = finite_difference_hessian_vector(obj.gradient, x, d);
  for (int j = 0; j < obj.dimension; ++j) {
    const double rel = std::abs(hv_fd(j) - hv(j)) / (1.0 + std::abs(hv(j)));
    report.hv_rel_error = std::max(report.hv_rel_error, rel);
  }

  report.pass = report.max_rel_error <= tol && report.hv_rel_error <= tol;
  return report;
}

ProblemInstance make_instance(Objective obj, const std::string& label, std::uint64_t x0_seed) {
  if (!obj.minimizer) throw std::invalid_argument("make_instance: objective must carry a minimizer");
  Rng rng(x0_seed);
  ProblemInstance instance;
  instance.x0 = *obj.minimizer + rng.unit_vector(obj.dimension);
  instance.objective = std::move(obj);
  instance.label = label;
  return instance;
}

ProblemInstance canonical_quadratic(double mu, double lipschitz) {
  return make_instance(make_quadratic(10, mu, lipschitz, 11), "quadratic", 9);
}

ProblemInstance canonical_logistic() {
  return make_instance(make_logistic(50, 5, 0.1, 3), "logistic", 9);
}

ProblemInstance canonical_log_sum_exp() {
  return make_instance(make_log_sum_exp(5, 1.0, 1), "log-sum-exp", 9);
}

}  // namespace accelode
