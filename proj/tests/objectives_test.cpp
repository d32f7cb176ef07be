#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "accelode/objectives.hpp"
#include "accelode/rng.hpp"

using namespace accelode;

namespace {

// Every generated objective the suites ship with.
std::vector<Objective> shipped_objectives() {
  return {
      make_quadratic(1, 1.0, 1.0, 0),
      make_quadratic(10, 0.01, 1.0, 11),
      make_quadratic(5, 0.5, 8.0, 7),
      canonical_logistic().objective,
      canonical_log_sum_exp().objective,
  };
}

}  // namespace

TEST_CASE("quadratic: one-dimensional case is the unit parabola") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    Objective obj = make_quadratic(1, 1.0, 1.0, seed);
    Vector x(1);
    x << 3.0;
    CHECK(obj.evaluate(x) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(obj.gradient(x)(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK((*obj.minimizer)(0) == doctest::Approx(0.0));
    CHECK(*obj.min_value == doctest::Approx(0.0));
  }
}

TEST_CASE("quadratic: eigenvalue spacing hits both endpoints") {
  Objective obj = make_quadratic(2, 1.0, 10.0, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(*obj.hessian_matrix);
  CHECK(es.eigenvalues()(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(10.0).epsilon(1e-12));

  Objective obj5 = make_quadratic(5, 0.5, 8.0, 7);
  Eigen::SelfAdjointEigenSolver<Matrix> es5(*obj5.hessian_matrix);
  CHECK(es5.eigenvalues()(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(es5.eigenvalues()(4) == doctest::Approx(8.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i)
    CHECK(es5.eigenvalues()(i) == doctest::Approx(0.5 + 7.5 * i / 4.0).epsilon(1e-12));
}

TEST_CASE("quadratic: minimizer solves the stationarity equation") {
  Objective obj = make_quadratic(5, 0.5, 8.0, 7);
  CHECK(obj.gradient(*obj.minimizer).norm() <= 1e-10);
}

TEST_CASE("quadratic: invalid shapes are rejected") {
  CHECK_THROWS_AS(make_quadratic(0, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(3, 2.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_quadratic(3, 0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("quadratic: gap identity matches the Hessian form") {
  Objective obj = make_quadratic(10, 0.01, 1.0, 11);
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    Vector x = *obj.minimizer + 2.0 * rng.gaussian_vector(10);
    Vector dev = x - *obj.minimizer;
    const double direct = obj.f_gap(x);
    const double via_hessian = 0.5 * dev.dot(*obj.hessian_matrix * dev);
    CHECK(std::abs(direct - via_hessian) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("logistic: symmetric data pins the minimizer at the origin") {
  // Each datum enters with both orientations (+z and -z, same label), making
  // the data loss even in x; with the ridge term the unique minimizer is 0.
  Rng rng(21);
  const int half = 10, dim = 4;
  LogisticData data;
  data.reg = 1.0;
  data.z.resize(2 * half, dim);
  data.y.resize(2 * half);
  for (int i = 0; i < half; ++i) {
    Vector z = rng.gaussian_vector(dim);
    const double label = rng.uniform() < 0.5 ? -1.0 : 1.0;
    data.z.row(2 * i) = z.transpose();
    data.z.row(2 * i + 1) = -z.transpose();
    data.y(2 * i) = label;
    data.y(2 * i + 1) = label;
  }
  Objective obj = make_logistic_from_data(data);
  CHECK(obj.minimizer->norm() <= 1e-9);
  CHECK(obj.gradient(Vector::Zero(dim)).norm() <= 1e-12);
}

TEST_CASE("logistic: constants derive from the generated data") {
  LogisticData data = make_logistic_data(50, 5, 0.1, 3);
  Objective obj = make_logistic_from_data(data);
  CHECK(obj.mu == doctest::Approx(0.1));
  const double r = data.z.rowwise().norm().maxCoeff();
  CHECK(obj.lipschitz == doctest::Approx(r * r / 4.0 + 0.1).epsilon(1e-15));
  CHECK_THROWS_AS(make_logistic(10, 2, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_logistic(10, 2, -1.0, 0), std::invalid_argument);
}

TEST_CASE("logistic: gradient agrees with central differences") {
  Objective obj = canonical_logistic().objective;
  CHECK(gradient_check(obj, Vector::Zero(obj.dimension), 1e-5).pass);
}

TEST_CASE("log-sum-exp: a single all-zero piece degenerates to a constant") {
  LogSumExpData data;
  data.sharpness = 1.0;
  data.a = Matrix::Zero(1, 3);
  data.b = Vector::Zero(1);
  Objective obj = make_log_sum_exp_from_data(data);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = rng.gaussian_vector(3);
    CHECK(obj.evaluate(x) == doctest::Approx(0.0));
    CHECK(obj.gradient(x).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("log-sum-exp: smoothness constant scans the generated pieces") {
  LogSumExpData data = make_log_sum_exp_data(2, 1.0, 1);
  Objective obj = make_log_sum_exp_from_data(data);
  CHECK(obj.mu == 0.0);
  CHECK(obj.lipschitz ==
        doctest::Approx(data.a.rowwise().squaredNorm().maxCoeff()).epsilon(1e-15));
  // Rows are recentered, so the pieces cannot share a common ascent direction.
  CHECK(data.a.colwise().sum().norm() <= 1e-12);
}

TEST_CASE("log-sum-exp: stored minimizer is first-order stationary") {
  Objective obj = canonical_log_sum_exp().objective;
  CHECK(obj.gradient(*obj.minimizer).norm() <= 1e-8);
}

TEST_CASE("log-sum-exp: far points exercise the shifted evaluation") {
  Objective obj = canonical_log_sum_exp().objective;
  Rng rng(8);
  Vector x = 1e3 * rng.unit_vector(obj.dimension);
  CHECK(std::isfinite(obj.evaluate(x)));
  CHECK(gradient_check(obj, x, 1e-5).pass);
}

TEST_CASE("gradient_check: quadratic gradients are reproduced almost exactly") {
  Objective obj = make_quadratic(6, 0.2, 3.0, 13);
  Rng rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    GradientCheckReport report = gradient_check(obj, rng.gaussian_vector(6), 1e-6);
    CHECK(report.pass);
    CHECK(report.max_rel_error <= 1e-8);
  }
}

TEST_CASE("gradient_check: rejects non-finite points") {
  Objective obj = make_quadratic(2, 1.0, 2.0, 0);
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(gradient_check(obj, bad, 1e-6), std::invalid_argument);
}

TEST_CASE("finite-difference Hessian action matches the analytic one") {
  Objective obj = canonical_logistic().objective;
  Rng rng(31);
  Vector x = rng.gaussian_vector(obj.dimension);
  Vector d = rng.unit_vector(obj.dimension);
  Vector analytic = obj.hessian_vector(x, d);
  Vector fd = finite_difference_hessian_vector(obj.gradient, x, d);
  CHECK((analytic - fd).norm() <= 1e-5 * (1.0 + analytic.norm()));
}

TEST_CASE("every shipped objective passes the oracle checks at 100 points") {
  for (const Objective& obj : shipped_objectives()) {
    CHECK(0.0 <= obj.mu);
    CHECK(obj.mu <= obj.lipschitz);
    CHECK(obj.gradient(*obj.minimizer).norm() <= 1e-8 * (1.0 + obj.lipschitz));
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
      Vector x = 2.0 * rng.gaussian_vector(obj.dimension);
      CHECK(gradient_check(obj, x, 1e-5).pass);
    }
  }
}

TEST_CASE("curvature inequalities hold on sampled pairs") {
  for (const Objective& obj : shipped_objectives()) {
    Rng rng(123);
    const double mu = obj.mu;
    const double lip = obj.lipschitz;
    double worst_convexity = 0.0, worst_smoothness = 0.0, worst_lipschitz = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      Vector x = 2.0 * rng.gaussian_vector(obj.dimension);
      Vector y = 2.0 * rng.gaussian_vector(obj.dimension);
      const double fx = obj.evaluate(x);
      const double fy = obj.evaluate(y);
      Vector gx = obj.gradient(x);
      const double linear = fx + gx.dot(y - x);
      const double dist2 = (y - x).squaredNorm();
      const double slack = 1e-9 * (1.0 + std::abs(fy));
      worst_convexity = std::max(worst_convexity, linear + 0.5 * mu * dist2 - fy - slack);
      worst_smoothness = std::max(worst_smoothness, fy - (linear + 0.5 * lip * dist2) - slack);
      const double grad_gap = (gx - obj.gradient(y)).norm();
      worst_lipschitz = std::max(
          worst_lipschitz, grad_gap - lip * (y - x).norm() * (1.0 + 1e-9) - 1e-12);
    }
    CHECK(worst_convexity <= 0.0);
    CHECK(worst_smoothness <= 0.0);
    CHECK(worst_lipschitz <= 0.0);
  }
}

TEST_CASE("canonical instances start unit distance from the minimizer") {
  for (const ProblemInstance& instance :
       {canonical_quadratic(0.01, 1.0), canonical_logistic(), canonical_log_sum_exp()}) {
    CHECK(instance.d0_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(instance.f0_gap() > 0.0);
    CHECK(static_cast<int>(instance.x0.size()) == instance.objective.dimension);
  }
}
