#include "rgdc/system.hpp"

#include <cmath>
#include <utility>

#include "rgdc/discretize.hpp"
#include "rgdc/errors.hpp"

namespace rgdc::mas {

namespace {

constexpr double kDcGainTol = 1e-9;

}  // namespace

DiscreteLtiSystem::DiscreteLtiSystem(Matrix A_, Matrix B_, Matrix C_tr_,
                                     Matrix C_st_, Matrix D_st_, double Ts_)
    : A(std::move(A_)),
      B(std::move(B_)),
      C_tr(std::move(C_tr_)),
      C_st(std::move(C_st_)),
      D_st(std::move(D_st_)),
      Ts(Ts_) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n)
    throw std::invalid_argument("DiscreteLtiSystem: A must be square");
  if (B.rows() != n || B.cols() != 1)
    throw std::invalid_argument("DiscreteLtiSystem: B must be n x 1");
  if (C_tr.rows() != 1 || C_tr.cols() != n)
    throw std::invalid_argument("DiscreteLtiSystem: C_tr must be 1 x n");
  if (C_st.cols() != n && C_st.rows() != 0)
    throw std::invalid_argument("DiscreteLtiSystem: C_st must be p x n");
  if (D_st.rows() != C_st.rows() || (D_st.rows() > 0 && D_st.cols() != 1))
    throw std::invalid_argument("DiscreteLtiSystem: D_st must be p x 1");
  if (!(Ts > 0.0))
    throw std::invalid_argument("DiscreteLtiSystem: Ts must be positive");
  numerics::require_finite("DiscreteLtiSystem A", A);
  numerics::require_finite("DiscreteLtiSystem B", B);
  numerics::require_finite("DiscreteLtiSystem C_tr", C_tr);
  if (C_st.size() > 0) numerics::require_finite("DiscreteLtiSystem C_st", C_st);
  if (D_st.size() > 0) numerics::require_finite("DiscreteLtiSystem D_st", D_st);

  if (spectral_radius() >= 1.0)
    throw std::invalid_argument(
        "DiscreteLtiSystem: A must be asymptotically stable (spectral radius "
        "< 1)");

  P_ = (Matrix::Identity(n, n) - A).partialPivLu().solve(B);
  const double dc = (C_tr * P_)(0, 0);
  if (std::abs(dc - 1.0) > kDcGainTol)
    throw std::invalid_argument(
        "DiscreteLtiSystem: DC gain from v to y_tr must equal 1");
}

double DiscreteLtiSystem::spectral_radius() const {
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

DiscreteLtiSystem make_pll(double G_lp, double G_VCO, double Ts) {
  Matrix A_cont(2, 2);
  A_cont << 0.0, 1.0, -G_lp * G_VCO, -G_lp;
  Matrix B_cont(2, 1);
  B_cont << 0.0, G_lp * G_VCO;
  auto [A_d, B_d] = numerics::zoh_discretize(A_cont, B_cont, Ts);

  Matrix C_tr(1, 2);
  C_tr << 1.0, 0.0;
  Matrix C_st(1, 2);
  C_st << 0.0, 1.0;
  Matrix D_st = Matrix::Zero(1, 1);
  return DiscreteLtiSystem(std::move(A_d), std::move(B_d), std::move(C_tr),
                           std::move(C_st), std::move(D_st), Ts);
}

}  // namespace rgdc::mas
