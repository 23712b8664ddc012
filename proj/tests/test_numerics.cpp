#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rgdc/discretize.hpp"
#include "rgdc/errors.hpp"
#include "rgdc/lp.hpp"

using rgdc::numerics::LpConstraintSense;
using rgdc::numerics::LpProblem;
using rgdc::numerics::LpResult;
using rgdc::numerics::LpSense;
using rgdc::numerics::LpStatus;
using rgdc::numerics::Matrix;
using rgdc::numerics::solve_boxed_max;
using rgdc::numerics::solve_lp;
using rgdc::numerics::solve_lp_min_geq;
using rgdc::numerics::Vector;
using rgdc::numerics::zoh_discretize;

namespace {

LpProblem make_problem(const Vector& c, const Matrix& M, const Vector& N,
                       LpSense sense = LpSense::maximize,
                       LpConstraintSense cs = LpConstraintSense::less_equal) {
  LpProblem p;
  p.objective = c;
  p.constraint_matrix = M;
  p.constraint_rhs = N;
  p.sense = sense;
  p.constraint_sense = cs;
  return p;
}

}  // namespace

TEST_CASE("lp box maximum") {
  Matrix M(4, 2);
  M << 1, 0, -1, 0, 0, 1, 0, -1;
  Vector N(4);
  N << 3, 1, 2, 0;
  Vector c(2);
  c << 1, 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective_value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(res.optimizer(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(res.optimizer(1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lp diagonal face optimum with negative variables") {
  // max x + y over x <= 1, y <= 2, x + y <= 2.5, x >= -4.
  Matrix M(4, 2);
  M << 1, 0, 0, 1, 1, 1, -1, 0;
  Vector N(4);
  N << 1, 2, 2.5, 4;
  Vector c(2);
  c << 1, 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective_value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK((M * res.optimizer - N).maxCoeff() <= 1e-9);
}

TEST_CASE("lp optimum at a negative coordinate") {
  // Free-variable split must reach optima in the negative orthant.
  Matrix M(2, 1);
  M << 1, -1;
  Vector N(2);
  N << -1, 5;  // -5 <= x <= -1
  Vector c(1);
  c << 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.optimizer(0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("lp infeasible") {
  Matrix M(2, 1);
  M << 1, -1;
  Vector N(2);
  N << 1, -2;  // x <= 1 and x >= 2
  Vector c(1);
  c << 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  CHECK(res.status == LpStatus::infeasible);
  CHECK(res.optimizer.size() == 0);
}

TEST_CASE("lp unbounded") {
  Matrix M(1, 1);
  M << -1;
  Vector N(1);
  N << 0;  // x >= 0, maximize x
  Vector c(1);
  c << 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  CHECK(res.status == LpStatus::unbounded);
}

TEST_CASE("lp minimize and greater-equal senses reduce correctly") {
  // min x + 2y over x >= 1, y >= 0.5, x + y >= 2  ->  optimum at (1.5, 0.5).
  Matrix M(3, 2);
  M << 1, 0, 0, 1, 1, 1;
  Vector N(3);
  N << 1, 0.5, 2;
  Vector c(2);
  c << 1, 2;
  const LpResult via_solve_lp = solve_lp(
      make_problem(c, M, N, LpSense::minimize, LpConstraintSense::greater_equal));
  const LpResult via_min_geq = solve_lp_min_geq(
      make_problem(c, M, N, LpSense::minimize, LpConstraintSense::greater_equal));
  REQUIRE(via_solve_lp.status == LpStatus::optimal);
  REQUIRE(via_min_geq.status == LpStatus::optimal);
  CHECK(via_solve_lp.objective_value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(via_min_geq.objective_value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK((M * via_min_geq.optimizer - N).minCoeff() >= -1e-9);
}

TEST_CASE("lp min_geq rejects other senses") {
  Matrix M(1, 1);
  M << 1;
  Vector N(1);
  N << 1;
  Vector c(1);
  c << 1;
  CHECK_THROWS_AS(solve_lp_min_geq(make_problem(c, M, N)),
                  std::invalid_argument);
}

TEST_CASE("lp dimension validation") {
  Matrix M(2, 2);
  M << 1, 0, 0, 1;
  Vector N(1);
  N << 1;
  Vector c(2);
  c << 1, 1;
  CHECK_THROWS_AS(solve_lp(make_problem(c, M, N)), std::invalid_argument);
  Vector N2(2);
  N2 << 1, 1;
  Vector c_bad(3);
  c_bad << 1, 1, 1;
  CHECK_THROWS_AS(solve_lp(make_problem(c_bad, M, N2)), std::invalid_argument);
}

TEST_CASE("lp rejects non-finite data") {
  Matrix M(1, 1);
  M << 1;
  Vector N(1);
  N << std::numeric_limits<double>::infinity();
  Vector c(1);
  c << 1;
  CHECK_THROWS(solve_lp(make_problem(c, M, N)));
}

TEST_CASE("lp degenerate vertex still terminates") {
  // Three constraints meeting at (1, 1); redundant active set.
  Matrix M(4, 2);
  M << 1, 0, 0, 1, 1, 1, 2, 1;
  Vector N(4);
  N << 1, 1, 2, 3;
  Vector c(2);
  c << 3, 1;
  const LpResult res = solve_lp(make_problem(c, M, N));
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective_value == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("boxed max agrees with the simplex on random bounded problems") {
  std::mt19937_64 rng(401u);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> offset(0.1, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(trial % 3);
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(trial % 7);
    Matrix M(m + 2 * d, d);
    Vector N(m + 2 * d);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) M(i, j) = coeff(rng);
      N(i) = offset(rng);  // origin strictly feasible
    }
    // Explicit +-10 bounds keep the simplex reference bounded.
    M.middleRows(m, d) = Matrix::Identity(d, d);
    M.bottomRows(d) = -Matrix::Identity(d, d);
    N.tail(2 * d).setConstant(10.0);
    Vector c(d);
    for (Eigen::Index j = 0; j < d; ++j) c(j) = coeff(rng);

    const LpResult ref = solve_lp(make_problem(c, M, N));
    const LpResult boxed = solve_boxed_max(c, M, N, 1e6);
    REQUIRE(ref.status == LpStatus::optimal);
    REQUIRE(boxed.status == LpStatus::optimal);
    CHECK(boxed.objective_value ==
          doctest::Approx(ref.objective_value).epsilon(1e-9));
    CHECK((M * boxed.optimizer - N).maxCoeff() <= 1e-7);
  }
}

TEST_CASE("boxed max clips unbounded directions at the box") {
  // max x subject only to -x <= 0; the box supplies the finite optimum.
  Matrix M(1, 2);
  M << -1, 0;
  Vector N(1);
  N << 0;
  Vector c(2);
  c << 1, 0;
  const LpResult res = solve_boxed_max(c, M, N, 1e3);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective_value == doctest::Approx(1e3).epsilon(1e-9));
}

TEST_CASE("boxed max reports infeasible rows") {
  Matrix M(2, 1);
  M << 1, -1;
  Vector N(2);
  N << 1, -2;  // x <= 1 and x >= 2
  Vector c(1);
  c << 1;
  CHECK(solve_boxed_max(c, M, N, 1e6).status == LpStatus::infeasible);
  // A row no point of the box can satisfy.
  Matrix M2(1, 1);
  M2 << 1;
  Vector N2(1);
  N2 << -2e6;
  CHECK(solve_boxed_max(c, M2, N2, 1e6).status == LpStatus::infeasible);
}

TEST_CASE("boxed max with no rows optimizes over the box alone") {
  Matrix M(0, 2);
  Vector N(0);
  Vector c(2);
  c << 2, -1;
  const LpResult res = solve_boxed_max(c, M, N, 5.0);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective_value == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(res.optimizer(0) == doctest::Approx(5.0));
  CHECK(res.optimizer(1) == doctest::Approx(-5.0));
}

TEST_CASE("boxed max validation") {
  Matrix M(1, 2);
  M << 1, 0;
  Vector N(1);
  N << 1;
  Vector c(2);
  c << 1, 1;
  CHECK_THROWS_AS(solve_boxed_max(c, M, Vector(Vector::Zero(2)), 1.0),
                  std::invalid_argument);
  Vector c3(3);
  c3 << 1, 1, 1;
  CHECK_THROWS_AS(solve_boxed_max(c3, M, N, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_boxed_max(c, M, N, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_boxed_max(c, M, N, -1.0), std::invalid_argument);
}

TEST_CASE("zoh scalar matches the closed form") {
  Matrix A(1, 1), B(1, 1);
  A << -2.0;
  B << 3.0;
  const double Ts = 0.1;
  const auto [Ad, Bd] = zoh_discretize(A, B, Ts);
  CHECK(Ad(0, 0) == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
  CHECK(Bd(0, 0) ==
        doctest::Approx(3.0 * (1.0 - std::exp(-0.2)) / 2.0).epsilon(1e-14));
}

TEST_CASE("zoh double integrator matches the closed form") {
  Matrix A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  const double Ts = 0.05;
  const auto [Ad, Bd] = zoh_discretize(A, B, Ts);
  CHECK(Ad(0, 0) == doctest::Approx(1.0));
  CHECK(Ad(0, 1) == doctest::Approx(Ts));
  CHECK(Ad(1, 0) == doctest::Approx(0.0));
  CHECK(Ad(1, 1) == doctest::Approx(1.0));
  CHECK(Bd(0, 0) == doctest::Approx(Ts * Ts / 2.0).epsilon(1e-12));
  CHECK(Bd(1, 0) == doctest::Approx(Ts).epsilon(1e-12));
}

TEST_CASE("zoh validation") {
  Matrix A(2, 2), B(1, 1), Anr(1, 2);
  A << 0, 1, 0, 0;
  Anr << 0, 1;
  B << 1;
  CHECK_THROWS_AS(zoh_discretize(Anr, B, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(zoh_discretize(A, B, 0.1), std::invalid_argument);
  Matrix B2(2, 1);
  B2 << 0, 1;
  CHECK_THROWS_AS(zoh_discretize(A, B2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(zoh_discretize(A, B2, -1.0), std::invalid_argument);
}
