#pragma once

#include "rgdc/types.hpp"

namespace rgdc::mas {

using numerics::Matrix;
using numerics::Vector;

// Discrete-time LTI plant with a scalar input, a scalar tracking output
// y_tr = C_tr x (no direct feedthrough) and p auxiliary static outputs
// y_st = C_st x + D_st v.
//
// Construction enforces asymptotic stability (spectral radius of A < 1)
// and unit DC gain from v to y_tr.
struct DiscreteLtiSystem {
  Matrix A;     // n x n
  Matrix B;     // n x 1
  Matrix C_tr;  // 1 x n
  Matrix C_st;  // p x n (p may be 0)
  Matrix D_st;  // p x 1
  double Ts = 0.0;

  DiscreteLtiSystem(Matrix A_, Matrix B_, Matrix C_tr_, Matrix C_st_,
                    Matrix D_st_, double Ts_);

  Eigen::Index order() const { return A.rows(); }
  Eigen::Index static_output_count() const { return C_st.rows(); }

  double spectral_radius() const;

  // (I - A)^{-1} B, cached at construction; x_ss = equilibrium_gain() * v.
  const Matrix& equilibrium_gain() const { return P_; }
  Vector equilibrium_state(double v) const { return P_ * v; }

 private:
  Matrix P_;
};

// The case-study phase-locked loop: loop filter gain G_lp, VCO gain G_VCO,
// continuous dynamics ẋ = [0 1; -G_lp*G_VCO -G_lp] x + [0; G_lp*G_VCO] v,
// discretized with zero-order hold. Tracking output x1 (phase), static
// output x2 (frequency deviation, subject to slew-rate bounds).
DiscreteLtiSystem make_pll(double G_lp, double G_VCO, double Ts);

}  // namespace rgdc::mas
