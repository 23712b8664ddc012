#include "rgdc/governor.hpp"

#include <algorithm>

namespace rgdc::governor {

namespace {

using mas::Orientation;

double min_kappa_over_rows(const MasRepresentation& rep,
                           Orientation orientation, double rhs_scale,
                           const Vector& x, double v_prev, double r) {
  double kappa = 1.0;
  const Vector lhs = rep.H_x * x;
  for (Eigen::Index j = 0; j < rep.rows(); ++j) {
    double n = rhs_scale * rep.h(j) - lhs(j) - rep.H_v(j) * v_prev;
    double d = rep.H_v(j) * (r - v_prev);
    if (orientation == Orientation::greater_equal) {
      n = -n;
      d = -d;
    }
    kappa = std::min(kappa, kappa_row(n, d));
    if (kappa == 0.0) break;
  }
  return kappa;
}

}  // namespace

double kappa_row(double n, double d) {
  if (n > 0.0) return d > 0.0 ? std::min(n / d, 1.0) : 1.0;
  return 0.0;
}

std::pair<double, int> rg_dc_kappa(const GovernorState& state, const Vector& x,
                                   double r, double y_tr) {
  const auto sel = mas::select_dynamic_mas(state.pair, r, y_tr);
  const double kappa = min_kappa_over_rows(*sel.rep, sel.orientation,
                                           sel.rhs_scale, x, state.v_prev, r);
  return {kappa, sel.mas_case};
}

double rg_static_kappa(const GovernorState& state, const Vector& x, double r) {
  if (!state.static_mas) return 1.0;
  return min_kappa_over_rows(*state.static_mas, state.static_mas->orientation,
                             1.0, x, state.v_prev, r);
}

GovernorDecision govern_step(GovernorState& state, const Vector& x, double r,
                             double y_tr) {
  GovernorDecision dec;
  const auto [kappa_tr, mas_case] = rg_dc_kappa(state, x, r, y_tr);
  dec.kappa_tr = kappa_tr;
  dec.mas_case = mas_case;
  dec.kappa_st = rg_static_kappa(state, x, r);
  dec.kappa_star = std::min(dec.kappa_tr, dec.kappa_st);

  const auto sel = mas::select_dynamic_mas(state.pair, r, y_tr);
  dec.feasible =
      mas::contains(*sel.rep, sel.orientation, sel.rhs_scale, x, state.v_prev);
  if (state.static_mas)
    dec.feasible = dec.feasible && mas::contains(*state.static_mas, x, state.v_prev);

  dec.v = state.v_prev + dec.kappa_star * (r - state.v_prev);
  state.v_prev = dec.v;
  return dec;
}

}  // namespace rgdc::governor
