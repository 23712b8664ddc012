#include "rgdc/discretize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace rgdc::numerics {

std::pair<Matrix, Matrix> zoh_discretize(const Matrix& A_cont,
                                         const Matrix& B_cont, double Ts) {
  if (A_cont.rows() != A_cont.cols())
    throw std::invalid_argument("zoh_discretize: A_cont must be square");
  if (B_cont.rows() != A_cont.rows())
    throw std::invalid_argument("zoh_discretize: B_cont row count mismatch");
  if (!(Ts > 0.0))
    throw std::invalid_argument("zoh_discretize: Ts must be positive");
  require_finite("zoh_discretize A_cont", A_cont);
  require_finite("zoh_discretize B_cont", B_cont);

  const Eigen::Index n = A_cont.rows();
  const Eigen::Index nu = B_cont.cols();
  Matrix aug = Matrix::Zero(n + nu, n + nu);
  aug.topLeftCorner(n, n) = A_cont;
  aug.topRightCorner(n, nu) = B_cont;
  const Matrix E = (aug * Ts).exp();
  return {E.topLeftCorner(n, n), E.topRightCorner(n, nu)};
}

}  // namespace rgdc::numerics
