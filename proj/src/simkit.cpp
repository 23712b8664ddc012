#include "rgdc/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rgdc/errors.hpp"
#include "rgdc/format.hpp"

namespace rgdc::simkit {

ReferenceSignal ReferenceSignal::constant(double level) {
  ReferenceSignal ref;
  ref.kind = Kind::constant;
  ref.amplitude = level;
  return ref;
}

ReferenceSignal ReferenceSignal::step_sequence(
    std::vector<std::pair<double, double>> steps) {
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i].first > steps[i - 1].first))
      throw std::invalid_argument(
          "ReferenceSignal: step times must be strictly increasing");
  ReferenceSignal ref;
  ref.kind = Kind::step_sequence;
  ref.steps = std::move(steps);
  return ref;
}

ReferenceSignal ReferenceSignal::sinusoid(double amplitude, double frequency) {
  if (!(frequency > 0.0))
    throw std::invalid_argument("ReferenceSignal: frequency must be positive");
  ReferenceSignal ref;
  ref.kind = Kind::sinusoid;
  ref.amplitude = amplitude;
  ref.frequency = frequency;
  return ref;
}

double ReferenceSignal::eval(double t) const {
  switch (kind) {
    case Kind::constant:
      return amplitude;
    case Kind::sinusoid:
      return amplitude * std::sin(frequency * t);
    case Kind::step_sequence: {
      double level = 0.0;
      for (const auto& [time, value] : steps) {
        if (t < time) break;
        level = value;
      }
      return level;
    }
  }
  return 0.0;
}

namespace {

void check_sim_inputs(const DiscreteLtiSystem& sys, const Vector& x0,
                      long steps) {
  if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
  if (x0.size() != sys.order())
    throw std::invalid_argument("simulate: x0 dimension mismatch");
}

void reserve_trace(SimulationTrace& tr, const DiscreteLtiSystem& sys,
                   long steps) {
  tr.Ts = sys.Ts;
  tr.p = sys.static_output_count();
  const auto n = static_cast<std::size_t>(steps);
  tr.t.reserve(n);
  tr.r.reserve(n);
  tr.v.reserve(n);
  tr.y_tr.reserve(n);
  tr.y_st.reserve(n * static_cast<std::size_t>(tr.p));
  tr.kappa_tr.reserve(n);
  tr.kappa_st.reserve(n);
  tr.kappa_star.reserve(n);
  tr.mas_case.reserve(n);
  tr.feasible.reserve(n);
}

void record_static_outputs(SimulationTrace& tr, const DiscreteLtiSystem& sys,
                           const Vector& x, double v) {
  if (tr.p == 0) return;
  const Vector y = sys.C_st * x + sys.D_st * v;
  for (Eigen::Index i = 0; i < y.size(); ++i) tr.y_st.push_back(y(i));
}

}  // namespace

SimulationTrace simulate(const DiscreteLtiSystem& sys, GovernorState& state,
                         const ReferenceSignal& ref, const Vector& x0,
                         long steps) {
  check_sim_inputs(sys, x0, steps);
  SimulationTrace tr;
  reserve_trace(tr, sys, steps);
  Vector x = x0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * sys.Ts;
    const double r = ref.eval(t);
    const double y_tr = (sys.C_tr * x)(0, 0);
    const auto dec = governor::govern_step(state, x, r, y_tr);
    tr.t.push_back(t);
    tr.r.push_back(r);
    tr.v.push_back(dec.v);
    tr.y_tr.push_back(y_tr);
    record_static_outputs(tr, sys, x, dec.v);
    tr.kappa_tr.push_back(dec.kappa_tr);
    tr.kappa_st.push_back(dec.kappa_st);
    tr.kappa_star.push_back(dec.kappa_star);
    tr.mas_case.push_back(dec.mas_case);
    tr.feasible.push_back(dec.feasible ? 1 : 0);
    x = sys.A * x + sys.B * dec.v;
  }
  return tr;
}

SimulationTrace simulate_linear(const DiscreteLtiSystem& sys,
                                const ReferenceSignal& ref, const Vector& x0,
                                long steps) {
  check_sim_inputs(sys, x0, steps);
  SimulationTrace tr;
  reserve_trace(tr, sys, steps);
  Vector x = x0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * sys.Ts;
    const double r = ref.eval(t);
    const double y_tr = (sys.C_tr * x)(0, 0);
    tr.t.push_back(t);
    tr.r.push_back(r);
    tr.v.push_back(r);
    tr.y_tr.push_back(y_tr);
    record_static_outputs(tr, sys, x, r);
    tr.kappa_tr.push_back(1.0);
    tr.kappa_st.push_back(1.0);
    tr.kappa_star.push_back(1.0);
    tr.mas_case.push_back(0);
    tr.feasible.push_back(1);
    x = sys.A * x + sys.B * r;
  }
  return tr;
}

SimulationTrace multi_step_experiment(
    const DiscreteLtiSystem& sys, GovernorState& state,
    const std::vector<std::pair<double, double>>& steps, long horizon) {
  const auto ref = ReferenceSignal::step_sequence(steps);
  return simulate(sys, state, ref, Vector::Zero(sys.order()), horizon);
}

std::vector<SimulationTrace> convergence_experiment(
    const DiscreteLtiSystem& sys, const GovernorState& state, long n_runs,
    const InitialConditionRanges& ranges, double omega, std::uint64_t seed,
    long horizon) {
  if (n_runs < 1)
    throw std::invalid_argument("convergence_experiment: n_runs must be >= 1");
  if (ranges.x_min.size() != sys.order() ||
      ranges.x_max.size() != sys.order())
    throw std::invalid_argument(
        "convergence_experiment: range dimension mismatch");
  std::mt19937_64 rng(seed);
  const auto ref = ReferenceSignal::sinusoid(1.0, omega);
  std::vector<SimulationTrace> traces;
  traces.reserve(static_cast<std::size_t>(n_runs));
  for (long run = 0; run < n_runs; ++run) {
    Vector x0(sys.order());
    for (Eigen::Index i = 0; i < sys.order(); ++i) {
      std::uniform_real_distribution<double> dist(ranges.x_min(i),
                                                  ranges.x_max(i));
      x0(i) = dist(rng);
    }
    std::uniform_real_distribution<double> vdist(ranges.v_min, ranges.v_max);
    GovernorState st = state;
    st.v_prev = vdist(rng);
    traces.push_back(simulate(sys, st, ref, x0, horizon));
  }
  return traces;
}

double final_window_spread(const std::vector<SimulationTrace>& traces,
                           double fraction) {
  if (traces.size() < 2) return 0.0;
  const std::size_t n = traces.front().size();
  for (const auto& tr : traces)
    if (tr.size() != n)
      throw std::invalid_argument(
          "final_window_spread: traces must share a horizon");
  const auto start = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) * (1.0 - fraction)));
  double spread = 0.0;
  for (std::size_t a = 0; a + 1 < traces.size(); ++a)
    for (std::size_t b = a + 1; b < traces.size(); ++b)
      for (std::size_t k = start; k < n; ++k)
        spread = std::max(
            spread, std::abs(traces[a].y_tr[k] - traces[b].y_tr[k]));
  return spread;
}

namespace {

struct BodeWindow {
  long steps = 0;
  long measure_samples = 0;
};

// Horizon long enough for both the requested period count and twice a
// settling-time estimate from the slowest mode; the measurement window is an
// integer number of periods inside the final 40%.
BodeWindow bode_window(const DiscreteLtiSystem& sys, double omega,
                       long periods) {
  if (!(omega > 0.0))
    throw std::invalid_argument("bode sweep: omega must be positive");
  if (periods < 1)
    throw ConfigError("bode sweep: need at least one period");
  const double period = 2.0 * M_PI / omega;
  const double rho = sys.spectral_radius();
  const double tau = -sys.Ts / std::log(rho);
  const double horizon_s =
      std::max(static_cast<double>(periods) * period, 8.0 * tau);
  BodeWindow w;
  w.steps = static_cast<long>(std::ceil(horizon_s / sys.Ts));
  const double window_s = 0.4 * static_cast<double>(w.steps) * sys.Ts;
  const double n_per = std::floor(window_s / period);
  if (n_per < 1.0)
    throw ConfigError(
        "bode sweep: horizon shorter than one period after transient discard");
  w.measure_samples = static_cast<long>(std::llround(n_per * period / sys.Ts));
  w.measure_samples = std::min(w.measure_samples, w.steps);
  return w;
}

BodePoint measure_point(const SimulationTrace& tr, double omega,
                        double amplitude, long measure_samples) {
  const auto n = static_cast<long>(tr.size());
  double sup = 0.0;
  for (long k = n - measure_samples; k < n; ++k)
    sup = std::max(sup, std::abs(tr.y_tr[static_cast<std::size_t>(k)]));
  BodePoint pt;
  pt.omega = omega;
  pt.input_amplitude = amplitude;
  pt.sup_output = sup;
  pt.magnitude_db = 20.0 * std::log10(sup / amplitude);
  return pt;
}

}  // namespace

std::vector<BodePoint> nonlinear_bode(const DiscreteLtiSystem& sys,
                                      const GovernorState& state,
                                      const std::vector<double>& omegas,
                                      double amplitude, long periods) {
  if (!(amplitude > 0.0))
    throw std::invalid_argument("bode sweep: amplitude must be positive");
  std::vector<BodePoint> points;
  points.reserve(omegas.size());
  for (const double omega : omegas) {
    const BodeWindow w = bode_window(sys, omega, periods);
    GovernorState st = state;
    st.v_prev = 0.0;
    const auto ref = ReferenceSignal::sinusoid(amplitude, omega);
    const auto tr = simulate(sys, st, ref, Vector::Zero(sys.order()), w.steps);
    points.push_back(measure_point(tr, omega, amplitude, w.measure_samples));
  }
  return points;
}

std::vector<BodePoint> bode_linear(const DiscreteLtiSystem& sys,
                                   const std::vector<double>& omegas,
                                   double amplitude, long periods) {
  if (!(amplitude > 0.0))
    throw std::invalid_argument("bode sweep: amplitude must be positive");
  std::vector<BodePoint> points;
  points.reserve(omegas.size());
  for (const double omega : omegas) {
    const BodeWindow w = bode_window(sys, omega, periods);
    const auto ref = ReferenceSignal::sinusoid(amplitude, omega);
    const auto tr = simulate_linear(sys, ref, Vector::Zero(sys.order()), w.steps);
    points.push_back(measure_point(tr, omega, amplitude, w.measure_samples));
  }
  return points;
}

std::vector<double> log_spaced(long count, double lo, double hi) {
  if (count < 1) throw std::invalid_argument("log_spaced: count must be >= 1");
  if (!(lo > 0.0) || !(hi > 0.0))
    throw std::invalid_argument("log_spaced: bounds must be positive");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const double ratio = std::log(hi / lo);
  for (long k = 0; k < count; ++k)
    out.push_back(lo * std::exp(ratio * static_cast<double>(k) /
                                static_cast<double>(count - 1)));
  return out;
}

double overshoot_metric(const SimulationTrace& trace, double r_final,
                        bool* flagged) {
  if (trace.size() == 0)
    throw std::invalid_argument("overshoot_metric: empty trace");
  if (flagged) *flagged = false;
  if (r_final > 0.0) {
    const double peak = *std::max_element(trace.y_tr.begin(), trace.y_tr.end());
    return std::max(0.0, peak - r_final) / r_final;
  }
  if (r_final < 0.0) {
    const double trough =
        *std::min_element(trace.y_tr.begin(), trace.y_tr.end());
    return std::max(0.0, r_final - trough) / -r_final;
  }
  if (flagged) *flagged = true;
  double peak = 0.0;
  for (const double y : trace.y_tr) peak = std::max(peak, std::abs(y));
  return peak;
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
  out << "t,r,v,y_tr";
  for (Eigen::Index i = 0; i < trace.p; ++i) out << ",y_st_" << (i + 1);
  out << ",kappa_tr,kappa_st,kappa_star,mas_case,feasible\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << detail::g17(trace.t[k]) << ',' << detail::g17(trace.r[k]) << ','
        << detail::g17(trace.v[k]) << ',' << detail::g17(trace.y_tr[k]);
    for (Eigen::Index i = 0; i < trace.p; ++i)
      out << ','
          << detail::g17(
                 trace.y_st[k * static_cast<std::size_t>(trace.p) +
                            static_cast<std::size_t>(i)]);
    out << ',' << detail::g17(trace.kappa_tr[k]) << ','
        << detail::g17(trace.kappa_st[k]) << ','
        << detail::g17(trace.kappa_star[k]) << ',' << trace.mas_case[k] << ','
        << static_cast<int>(trace.feasible[k]) << '\n';
  }
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file: " + path);
  write_trace_csv(trace, f);
}

void write_bode_csv(const std::vector<BodePoint>& points, std::ostream& out) {
  out << "omega_rad_s,amplitude,sup_output,magnitude_db\n";
  for (const auto& pt : points)
    out << detail::g17(pt.omega) << ',' << detail::g17(pt.input_amplitude)
        << ',' << detail::g17(pt.sup_output) << ','
        << detail::g17(pt.magnitude_db) << '\n';
}

void write_bode_csv(const std::vector<BodePoint>& points,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file: " + path);
  write_bode_csv(points, f);
}

}  // namespace rgdc::simkit
