#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "rgdc/errors.hpp"
#include "rgdc/simkit.hpp"
#include "support.hpp"

using namespace rgdc;
using namespace rgdc::simkit;
using governor::GovernorState;
using mas::build_dynamic_mas_pair;
using mas::build_static_mas;
using mas::make_pll;
using numerics::Matrix;
using numerics::Vector;
using testsupport::make_oscillatory;
using testsupport::symmetric_bound;

namespace {

GovernorState oscillatory_state(double epsilon = 1e-3) {
  GovernorState st;
  st.epsilon = epsilon;
  st.pair = build_dynamic_mas_pair(make_oscillatory(), epsilon);
  return st;
}

}  // namespace

TEST_CASE("reference signal shapes") {
  const auto c = ReferenceSignal::constant(0.7);
  CHECK(c.eval(0.0) == doctest::Approx(0.7));
  CHECK(c.eval(1e6) == doctest::Approx(0.7));

  const auto seq =
      ReferenceSignal::step_sequence({{1.0, 0.5}, {2.0, -0.25}});
  CHECK(seq.eval(0.0) == doctest::Approx(0.0));  // before the first switch
  CHECK(seq.eval(1.0) == doctest::Approx(0.5));
  CHECK(seq.eval(1.999) == doctest::Approx(0.5));
  CHECK(seq.eval(2.0) == doctest::Approx(-0.25));
  CHECK(seq.eval(100.0) == doctest::Approx(-0.25));

  const auto sine = ReferenceSignal::sinusoid(2.0, 3.0);
  CHECK(sine.eval(0.0) == doctest::Approx(0.0));
  CHECK(sine.eval(0.5) == doctest::Approx(2.0 * std::sin(1.5)));

  CHECK_THROWS_AS(ReferenceSignal::step_sequence({{1.0, 0.5}, {1.0, 0.6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReferenceSignal::step_sequence({{2.0, 0.5}, {1.0, 0.6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReferenceSignal::sinusoid(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ReferenceSignal::sinusoid(1.0, -2.0),
                  std::invalid_argument);
}

TEST_CASE("zero reference from rest stays at rest") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  const auto trace = simulate(sys, st, ReferenceSignal::constant(0.0),
                              Vector::Zero(2), 50);
  REQUIRE(trace.size() == 50);
  CHECK(trace.p == 1);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    CHECK(trace.v[k] == doctest::Approx(0.0));
    CHECK(trace.y_tr[k] == doctest::Approx(0.0));
    CHECK(trace.t[k] == doctest::Approx(static_cast<double>(k) * sys.Ts));
    CHECK(trace.feasible[k] == 1);
  }
}

TEST_CASE("simulate validates its inputs") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  CHECK_THROWS_AS(simulate(sys, st, ReferenceSignal::constant(0.0),
                           Vector::Zero(2), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(sys, st, ReferenceSignal::constant(0.0),
                           Vector::Zero(3), 10),
                  std::invalid_argument);
}

TEST_CASE("ungoverned second-order overshoot matches the damping ratio") {
  const auto pll = make_pll(100.0, 200.0, 1e-4);
  const auto trace = simulate_linear(pll, ReferenceSignal::constant(1.0),
                                     Vector::Zero(2), 8000);
  const double overshoot = overshoot_metric(trace, 1.0);
  const double zeta = 1.0 / (2.0 * std::sqrt(2.0));
  const double expected =
      std::exp(-M_PI * zeta / std::sqrt(1.0 - zeta * zeta));
  CHECK(overshoot == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("governed step response of the oscillatory plant does not overshoot") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  const auto trace = simulate(sys, st, ReferenceSignal::constant(1.0),
                              Vector::Zero(2), 1500);
  CHECK(overshoot_metric(trace, 1.0) <= 1e-8);
  CHECK(trace.y_tr.back() == doctest::Approx(1.0).epsilon(5e-3));
  CHECK(trace.v.back() == doctest::Approx(1.0 - st.epsilon).epsilon(1e-6));
  // The ungoverned plant overshoots badly, so the governor is doing work.
  const auto lin = simulate_linear(sys, ReferenceSignal::constant(1.0),
                                   Vector::Zero(2), 1500);
  CHECK(overshoot_metric(lin, 1.0) > 0.2);
}

TEST_CASE("linear simulation equals the matrix recursion") {
  const auto sys = make_oscillatory();
  const auto ref = ReferenceSignal::sinusoid(0.5, 0.2);
  Vector x(2);
  x << 0.3, -0.1;
  const auto trace = simulate_linear(sys, ref, x, 200);
  for (long k = 0; k < 200; ++k) {
    const double t = static_cast<double>(k) * sys.Ts;
    const double r = ref.eval(t);
    CHECK(std::abs(trace.r[static_cast<std::size_t>(k)] - r) <= 1e-15);
    CHECK(std::abs(trace.y_tr[static_cast<std::size_t>(k)] -
                   (sys.C_tr * x)(0, 0)) <= 1e-12);
    CHECK(std::abs(trace.y_st[static_cast<std::size_t>(k)] -
                   ((sys.C_st * x)(0, 0) + sys.D_st(0, 0) * r)) <= 1e-12);
    CHECK(trace.kappa_star[static_cast<std::size_t>(k)] == 1.0);
    x = sys.A * x + sys.B * r;
  }
}

TEST_CASE("multi step experiment switches levels and settles") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  const auto trace =
      multi_step_experiment(sys, st, {{0.0, 0.6}, {150.0, -0.4}}, 600);
  REQUIRE(trace.size() == 600);
  CHECK(trace.r[0] == doctest::Approx(0.6));
  CHECK(trace.r[149] == doctest::Approx(0.6));
  CHECK(trace.r[150] == doctest::Approx(-0.4));
  CHECK(trace.v.back() == doctest::Approx(-0.4 * (1.0 - st.epsilon))
                              .epsilon(1e-6));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    CHECK(trace.kappa_star[k] >= 0.0);
    CHECK(trace.kappa_star[k] <= 1.0);
  }
}

TEST_CASE("convergence experiment is deterministic per seed") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  InitialConditionRanges ranges;
  ranges.x_min = Vector(2);
  ranges.x_min << -0.5, -0.5;
  ranges.x_max = Vector(2);
  ranges.x_max << 0.5, 0.5;
  ranges.v_min = -0.5;
  ranges.v_max = 0.5;

  const auto a = convergence_experiment(sys, st, 3, ranges, 0.2, 99u, 400);
  const auto b = convergence_experiment(sys, st, 3, ranges, 0.2, 99u, 400);
  const auto c = convergence_experiment(sys, st, 3, ranges, 0.2, 100u, 400);
  REQUIRE(a.size() == 3);
  for (std::size_t run = 0; run < 3; ++run)
    for (std::size_t k = 0; k < a[run].size(); ++k)
      CHECK(a[run].v[k] == b[run].v[k]);
  CHECK(a[0].y_tr[0] != c[0].y_tr[0]);

  // Runs forget their initial condition: traces coincide at the tail.
  const auto spread = final_window_spread(a, 0.2);
  CHECK(spread < 0.05);
}

TEST_CASE("final window spread on hand-made traces") {
  SimulationTrace a, b;
  a.t = {0, 1, 2, 3};
  a.y_tr = {0.0, 0.0, 1.0, 2.0};
  b.t = a.t;
  b.y_tr = {5.0, 9.0, 1.0, 3.0};
  a.Ts = b.Ts = 1.0;
  CHECK(final_window_spread({a, a}, 0.5) == doctest::Approx(0.0));
  CHECK(final_window_spread({a, b}, 0.5) == doctest::Approx(1.0));
  CHECK(final_window_spread({a}, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("linear bode of the case-study loop is flat at low frequency") {
  const auto pll = make_pll(100.0, 200.0, 1e-4);
  const auto pts = bode_linear(pll, {10.0}, 1.0, 50);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].omega == doctest::Approx(10.0));
  // |20000 / (20000 - 100 + 1000j)| in decibels.
  const double expected =
      20.0 * std::log10(20000.0 / std::hypot(19900.0, 1000.0));
  CHECK(pts[0].magnitude_db == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("linear bode magnitude is amplitude independent") {
  const auto sys = make_oscillatory();
  const auto small = bode_linear(sys, {0.2, 0.5}, 0.5, 40);
  const auto large = bode_linear(sys, {0.2, 0.5}, 2.0, 40);
  REQUIRE(small.size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(small[i].magnitude_db ==
          doctest::Approx(large[i].magnitude_db).epsilon(1e-6));
}

TEST_CASE("governed sweep stays bounded") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  const auto pts = nonlinear_bode(sys, st, {0.2}, 0.3, 40);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].sup_output > 0.0);
  CHECK(pts[0].sup_output <= 1.0 + 1e-9);  // constraint bound
  CHECK(pts[0].magnitude_db ==
        doctest::Approx(20.0 * std::log10(pts[0].sup_output / 0.3))
            .epsilon(1e-12));
}

TEST_CASE("bode sweep rejects unresolvable frequencies") {
  const auto sys = make_oscillatory();
  // Two requested periods exceed the horizon, but the 40% measurement
  // window then holds less than one full period.
  CHECK_THROWS_AS(bode_linear(sys, {0.05}, 1.0, 2), ConfigError);
  CHECK_THROWS_AS(bode_linear(sys, {1.0}, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(bode_linear(sys, {-1.0}, 1.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(bode_linear(sys, {1.0}, 0.0, 50), std::invalid_argument);
}

TEST_CASE("log spacing") {
  const auto pts = log_spaced(5, 10.0, 1000.0);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front() == doctest::Approx(10.0));
  CHECK(pts.back() == doctest::Approx(1000.0));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    CHECK(pts[i + 1] / pts[i] == doctest::Approx(std::pow(100.0, 0.25)));
  CHECK(log_spaced(1, 7.0, 9.0) == std::vector<double>{7.0});
  CHECK_THROWS_AS(log_spaced(0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(log_spaced(3, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("overshoot metric conventions") {
  SimulationTrace tr;
  tr.Ts = 1.0;
  tr.t = {0, 1, 2};

  tr.y_tr = {0.0, 1.2, 1.0};
  CHECK(overshoot_metric(tr, 1.0) == doctest::Approx(0.2));

  tr.y_tr = {0.0, 0.8, 0.99};
  CHECK(overshoot_metric(tr, 1.0) == doctest::Approx(0.0));

  tr.y_tr = {0.0, -1.3, -1.0};
  CHECK(overshoot_metric(tr, -1.0) == doctest::Approx(0.3));

  bool flagged = false;
  tr.y_tr = {0.0, -0.4, 0.2};
  CHECK(overshoot_metric(tr, 0.0, &flagged) == doctest::Approx(0.4));
  CHECK(flagged);

  SimulationTrace empty;
  CHECK_THROWS_AS(overshoot_metric(empty, 1.0), std::invalid_argument);
}

TEST_CASE("trace and bode csv headers") {
  const auto sys = make_oscillatory();
  GovernorState st = oscillatory_state();
  const auto trace = simulate(sys, st, ReferenceSignal::constant(0.5),
                              Vector::Zero(2), 5);
  std::ostringstream out;
  write_trace_csv(trace, out);
  const std::string text = out.str();
  CHECK(text.rfind("t,r,v,y_tr,y_st_1,kappa_tr,kappa_st,kappa_star,"
                   "mas_case,feasible\n",
                   0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);

  std::ostringstream bout;
  write_bode_csv({BodePoint{10.0, 1.0, 1.5, 3.52}}, bout);
  CHECK(bout.str().rfind("omega_rad_s,amplitude,sup_output,magnitude_db\n",
                         0) == 0);
}
