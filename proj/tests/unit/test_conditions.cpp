#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sdanc/conditions.hpp"
#include "sdanc/config.hpp"
#include "sdanc/experiment.hpp"

using namespace sdanc;

TEST_SUITE("conditions") {

TEST_CASE("zero regressor is degenerate and passes") {
  const auto r = check_lms_conditions(Matrix::Zero(20, 4), 3.0, 5, 1.0);
  CHECK(r.gamma == 0.0);
  CHECK(r.max_lambda == 0.0);
  CHECK(r.degenerate);
  CHECK(std::isinf(r.mu_bound));
  CHECK(r.all_pass());
}

TEST_CASE("huge step fails the step-size condition") {
  const ContinuousStateSpace lag(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  std::vector<double> pulse(40, 0.0);
  pulse[0] = 1.0;
  const Matrix u = filtered_blocks(discretize_lifted(lag, 1.0, 4), pulse);
  const auto r = check_lms_conditions(u, 1e6, 4, 1.0);
  CHECK(r.bounded);
  CHECK_FALSE(r.step_size_ok);
  CHECK_FALSE(r.all_pass());
  const auto small = check_lms_conditions(u, 0.1, 4, 1.0);
  CHECK(small.step_size_ok);
  CHECK(small.mu_bound == doctest::Approx(2.0 / small.max_lambda));
}

TEST_CASE("empty trace and bad step are rejected") {
  CHECK_THROWS_AS(check_lms_conditions(Matrix(0, 4), 0.1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(check_lms_conditions(Matrix::Ones(3, 4), 0.0, 2, 1.0), std::invalid_argument);
}

TEST_CASE("cumulative Gram is Loewner monotone and matches the report") {
  std::mt19937_64 rng(4);
  const auto F = oracle::random_stable_plant(rng, 5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(60);
  for (auto& v : x) v = g(rng);
  const Matrix u = filtered_blocks(discretize_lifted(F, 1.0, 8), x);
  const auto phis = cumulative_gram(u, 6, 1.0);
  REQUIRE(phis.size() == 61);
  CHECK(phis.front().isZero(0.0));
  double gamma = 0.0, lmax = 0.0, eps = 0.0;
  const double mu = 0.05;
  for (std::size_t n = 1; n < phis.size(); ++n) {
    Eigen::SelfAdjointEigenSolver<Matrix> inc(phis[n] - phis[n - 1]);
    CHECK(inc.eigenvalues().minCoeff() >= -1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> full(phis[n]);
    lmax = std::max(lmax, full.eigenvalues().maxCoeff());
    gamma = std::max(gamma, full.eigenvalues().cwiseAbs().maxCoeff());
    eps = std::max(eps, mu * inc.eigenvalues().cwiseAbs().maxCoeff());
  }
  const auto r = check_lms_conditions(u, mu, 6, 1.0);
  CHECK(r.gamma == doctest::Approx(gamma).epsilon(1e-12));
  CHECK(r.max_lambda == doctest::Approx(lmax).epsilon(1e-12));
  CHECK(r.epsilon == doctest::Approx(eps).epsilon(1e-12));
  CHECK(r.intervals == 60);
}

TEST_CASE("epsilon threshold is configurable") {
  const Matrix u = Matrix::Ones(10, 2);
  LmsCheckOptions strict;
  strict.epsilon = 1e-6;
  CHECK_FALSE(check_lms_conditions(u, 0.01, 2, 1.0, strict).slowly_varying);
  LmsCheckOptions loose;
  loose.epsilon = 10.0;
  CHECK(check_lms_conditions(u, 0.01, 2, 1.0, loose).slowly_varying);
}

TEST_CASE("experiment run at mu = 0.1 matches the frozen report") {
  const auto run = run_single(default_config());
  const auto& r = run.conditions;
  // Frozen from the first run of the default configuration.
  CHECK(r.gamma == doctest::Approx(3.5027531538165411).epsilon(1e-9));
  CHECK(r.max_lambda == doctest::Approx(3.5027531538165411).epsilon(1e-9));
  CHECK(r.epsilon == doctest::Approx(0.034461510379273044).epsilon(1e-9));
  CHECK(r.intervals == 100);
  CHECK(r.all_pass());
}

}  // TEST_SUITE
