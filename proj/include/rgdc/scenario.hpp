#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgdc/mas.hpp"
#include "rgdc/simkit.hpp"

namespace rgdc::cli {

using numerics::Matrix;
using numerics::Vector;

// A fully resolved experiment description. Loadable from a JSON config or
// from a previously written run manifest (line-oriented `key = value` with
// dotted keys); both forms round-trip.
struct Scenario {
  enum class SystemForm : std::uint8_t { pll, continuous, discrete };

  std::string name = "scenario";
  std::string experiment = "simulate";
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  std::string output_dir;

  SystemForm form = SystemForm::pll;
  double pll_G_lp = 100.0;
  double pll_G_VCO = 200.0;
  Matrix A, B, C_tr, C_st, D_st;  // continuous or discrete forms
  double Ts = 1e-4;

  bool has_constraints = false;
  mas::ConstraintSet constraints;

  simkit::ReferenceSignal reference = simkit::ReferenceSignal::constant(0.0);

  Vector x0;  // empty means zeros
  std::optional<double> v0;  // default: y_tr at x0
  long horizon = 8000;

  struct BodeOptions {
    long points = 100;
    double omega_min = 10.0;
    double omega_max = 1000.0;
    double amplitude = 1.0;
    long periods = 50;
  } bode;

  struct ConvergeOptions {
    long runs = 50;
    double omega = 100.0;
    long horizon = 5000;
    Vector x_min, x_max;  // empty until resolved against the system order
    double v_min = -1.0;
    double v_max = 1.0;
  } converge;

  bool has_uncertainty = false;
  double gvco_min = 0.0;
  double gvco_max = 0.0;

  // Discrete-time matrices without any validity checks (validate reports on
  // these); continuous forms are discretized first.
  struct RawDiscrete {
    Matrix A, B, C_tr, C_st, D_st;
    double Ts = 0.0;
  };
  RawDiscrete raw_discrete() const;

  mas::DiscreteLtiSystem build_system() const;
  double resolved_v0(const mas::DiscreteLtiSystem& sys) const;
  Vector resolved_x0(const mas::DiscreteLtiSystem& sys) const;
};

Scenario load_scenario(const std::string& path);

// Resolved-parameter manifest, written into every run's output directory.
std::string scenario_manifest(const Scenario& sc);

struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> seed;
};

// Execute one experiment (mas | simulate | multistep | bode | robust |
// converge); writes CSVs and the manifest into the output directory.
// Returns a process exit status.
int run(const std::string& config_path, const std::string& experiment,
        const RunOverrides& overrides);

// Report-only checks: stability, DC gain, epsilon range.
int validate(const std::string& config_path,
             std::optional<double> epsilon_override);

}  // namespace rgdc::cli
