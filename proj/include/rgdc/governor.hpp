#pragma once

#include <optional>
#include <utility>

#include "rgdc/mas.hpp"

namespace rgdc::governor {

using mas::DynamicMasPair;
using mas::MasRepresentation;
using numerics::Vector;

struct GovernorState {
  double v_prev = 0.0;
  DynamicMasPair pair;
  std::optional<MasRepresentation> static_mas;
  double epsilon = 1e-3;
};

struct GovernorDecision {
  double v = 0.0;
  double kappa_tr = 0.0;
  double kappa_st = 0.0;
  double kappa_star = 0.0;
  int mas_case = 0;  // selection case 1..4, 0 for r = 0
  bool feasible = false;
};

// Scalar step-size rule: n > 0, d > 0 -> min(n/d, 1); n > 0, d <= 0 -> 1;
// n <= 0 -> 0.
double kappa_row(double n, double d);

// Maximal admissible step toward r against the selected dynamic MAS.
// Violation of the selected set at (x, v_prev) yields kappa 0, not an error.
std::pair<double, int> rg_dc_kappa(const GovernorState& state, const Vector& x,
                                   double r, double y_tr);

// Maximal admissible step against the static MAS; 1 when none is configured.
double rg_static_kappa(const GovernorState& state, const Vector& x, double r);

// Full governor update: v = v_prev + kappa*·(r - v_prev). Mutates
// state.v_prev to the applied reference.
GovernorDecision govern_step(GovernorState& state, const Vector& x, double r,
                             double y_tr);

}  // namespace rgdc::governor
