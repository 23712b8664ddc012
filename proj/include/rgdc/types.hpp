#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace rgdc::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Rejects NaN/Inf entries at module boundaries. Matrices are plain dense
// Eigen objects internally; the finiteness invariant is enforced wherever
// data enters a domain type.
template <class Derived>
void require_finite(const char* name, const Eigen::MatrixBase<Derived>& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(name) +
                                ": non-finite entry (NaN or Inf)");
  }
}

}  // namespace rgdc::numerics
