#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rgdc/governor.hpp"
#include "rgdc/system.hpp"

namespace rgdc::simkit {

using governor::GovernorState;
using mas::DiscreteLtiSystem;
using numerics::Vector;

struct ReferenceSignal {
  enum class Kind : std::uint8_t { constant, step_sequence, sinusoid };

  Kind kind = Kind::constant;
  std::vector<std::pair<double, double>> steps;  // (time s, level)
  double amplitude = 0.0;  // constant level, or sinusoid amplitude
  double frequency = 0.0;  // rad/s, sinusoid only

  static ReferenceSignal constant(double level);
  static ReferenceSignal step_sequence(
      std::vector<std::pair<double, double>> steps);
  static ReferenceSignal sinusoid(double amplitude, double frequency);

  // Value at time t; a step sequence is 0 before its first switching time.
  double eval(double t) const;
};

struct SimulationTrace {
  double Ts = 0.0;
  Eigen::Index p = 0;  // static output count
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> y_tr;
  std::vector<double> y_st;  // flattened, sample-major, p per sample
  std::vector<double> kappa_tr;
  std::vector<double> kappa_st;
  std::vector<double> kappa_star;
  std::vector<int> mas_case;
  std::vector<std::uint8_t> feasible;

  std::size_t size() const { return t.size(); }
};

struct BodePoint {
  double omega = 0.0;  // rad/s
  double input_amplitude = 0.0;
  double sup_output = 0.0;
  double magnitude_db = 0.0;
};

// Closed-loop simulation: at each sample evaluate r(t), run the governor,
// record outputs, then propagate x(t+1) = A x(t) + B v(t).
SimulationTrace simulate(const DiscreteLtiSystem& sys, GovernorState& state,
                         const ReferenceSignal& ref, const Vector& x0,
                         long steps);

// Ungoverned response (kappa forced to 1, v = r).
SimulationTrace simulate_linear(const DiscreteLtiSystem& sys,
                                const ReferenceSignal& ref, const Vector& x0,
                                long steps);

SimulationTrace multi_step_experiment(
    const DiscreteLtiSystem& sys, GovernorState& state,
    const std::vector<std::pair<double, double>>& steps, long horizon);

struct InitialConditionRanges {
  Vector x_min;
  Vector x_max;
  double v_min = 0.0;
  double v_max = 0.0;
};

// Governed runs from uniformly drawn initial states against the sinusoid
// sin(omega t); one trace per run, drawn with the seeded generator.
std::vector<SimulationTrace> convergence_experiment(
    const DiscreteLtiSystem& sys, const GovernorState& state, long n_runs,
    const InitialConditionRanges& ranges, double omega, std::uint64_t seed,
    long horizon = 5000);

// Max pairwise sup-distance of y_tr over the trailing fraction of the
// horizon; the convergence figure of merit.
double final_window_spread(const std::vector<SimulationTrace>& traces,
                           double fraction = 0.2);

// Sinusoid sweep: simulate each frequency to steady oscillation, discard the
// transient, measure the sup-norm of y_tr over an integer number of periods.
std::vector<BodePoint> nonlinear_bode(const DiscreteLtiSystem& sys,
                                      const GovernorState& state,
                                      const std::vector<double>& omegas,
                                      double amplitude, long periods = 50);

// Same sweep without the governor (linear response).
std::vector<BodePoint> bode_linear(const DiscreteLtiSystem& sys,
                                   const std::vector<double>& omegas,
                                   double amplitude, long periods = 50);

std::vector<double> log_spaced(long count, double lo, double hi);

// Relative overshoot of y_tr beyond the final reference (mirrored for
// negative references). For r_final = 0 the absolute peak is returned and
// *flagged set when provided.
double overshoot_metric(const SimulationTrace& trace, double r_final,
                        bool* flagged = nullptr);

void write_trace_csv(const SimulationTrace& trace, std::ostream& out);
void write_trace_csv(const SimulationTrace& trace, const std::string& path);
void write_bode_csv(const std::vector<BodePoint>& points, std::ostream& out);
void write_bode_csv(const std::vector<BodePoint>& points,
                    const std::string& path);

}  // namespace rgdc::simkit
